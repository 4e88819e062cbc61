#pragma once

#include <cmath>

namespace glab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
constexpr double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
// Rotation by +90 degrees.
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

// Symmetric 2x2 matrix.
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  constexpr Vec2 operator*(Vec2 v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
  constexpr Sym2 operator*(double s) const { return {xx * s, xy * s, yy * s}; }
  constexpr Sym2 operator+(Sym2 o) const { return {xx + o.xx, xy + o.xy, yy + o.yy}; }
};

// Replaces the eigenvalues of `m` by their absolute values (|m| in the spectral sense).
inline Sym2 spectral_abs(Sym2 m) {
  const double tr = 0.5 * (m.xx + m.yy);
  const double d = std::hypot(0.5 * (m.xx - m.yy), m.xy);
  const double l1 = tr + d;
  const double l2 = tr - d;
  if (d == 0.0) {
    const double a = std::abs(l1);
    return {a, 0.0, a};
  }
  // Projector onto the l1 eigenvector, P = (m - l2 I)/(l1 - l2).
  const double inv = 1.0 / (l1 - l2);
  const Sym2 p1{(m.xx - l2) * inv, m.xy * inv, (m.yy - l2) * inv};
  const double a1 = std::abs(l1);
  const double a2 = std::abs(l2);
  return {a2 + (a1 - a2) * p1.xx, (a1 - a2) * p1.xy, a2 + (a1 - a2) * p1.yy};
}

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Wraps an angle increment into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a + kPi, kTwoPi);
  if (a <= 0.0) a += kTwoPi;
  return a - kPi;
}

// Reduces to [0, 2pi).
inline double mod_two_pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

}  // namespace glab
