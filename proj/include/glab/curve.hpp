#pragma once

#include <optional>
#include <string>
#include <vector>

#include "glab/vec2.hpp"

namespace glab {

// Tube coordinates of a point near the curve: arc-length position of the
// nearest point and signed distance (positive on the inside).
struct TubeCoords {
  double s = 0.0;
  double t = 0.0;
};

struct CurveSpec {
  enum class Kind { kCircle, kEllipse, kRadial, kPoints };
  Kind kind = Kind::kCircle;
  double a = 1.0;                 // ellipse semi-axis along x
  double b = 1.0;                 // ellipse semi-axis along y
  std::string radius_expr = "1";  // kRadial: r(theta) of a perturbed circle
  std::vector<Vec2> points;       // kPoints: closed polyline, optionally repeating the first point
  int samples = 2048;

  static CurveSpec circle() { return {}; }
  static CurveSpec ellipse(double a, double b) {
    CurveSpec c;
    c.kind = Kind::kEllipse;
    c.a = a;
    c.b = b;
    return c;
  }
  static CurveSpec radial(std::string expr) {
    CurveSpec c;
    c.kind = Kind::kRadial;
    c.radius_expr = std::move(expr);
    return c;
  }
  static CurveSpec from_points(std::vector<Vec2> pts) {
    CurveSpec c;
    c.kind = Kind::kPoints;
    c.points = std::move(pts);
    return c;
  }
};

// Closed simple curve resampled uniformly in arc length and rescaled to total
// length 2*pi. Between samples the curve is the quintic Hermite interpolant of
// (point, unit tangent, curvature vector), so it is C2 and unit-speed at every
// sample. Immutable once built.
class PlanarCurve {
 public:
  static PlanarCurve build(const CurveSpec& spec);

  Vec2 tau(double s) const;
  Vec2 tangent(double s) const;  // d tau / ds
  Vec2 second_derivative(double s) const;
  double curvature(double s) const;
  Vec2 inward_normal(double s) const;

  // Nearest-point projection; throws Error(kOutsideTube) when dist >= tube_radius().
  TubeCoords project(Vec2 z) const;
  // Newton projection seeded at s_hint. Returns nullopt when the iteration does not
  // settle on a point with |t| < tube_radius() (then only the global search is reliable).
  std::optional<TubeCoords> project_from(Vec2 z, double s_hint) const;
  // Global nearest point (no tube restriction); t is the signed distance along the
  // normal and equals +-dist.
  TubeCoords nearest(Vec2 z) const;
  double distance(Vec2 z) const;

  double tube_radius() const { return tube_radius_; }
  double total_length() const { return kTwoPi; }
  double scale_factor() const { return scale_; }  // user coordinates * scale = internal
  double max_abs_curvature() const { return max_kappa_; }
  double max_norm() const { return max_norm_; }  // max |z| over the curve
  double signed_area() const;

  std::size_t sample_count() const { return points_.size(); }
  double sample_spacing() const { return ds_; }
  Vec2 sample_point(std::size_t i) const { return points_[i]; }
  Vec2 sample_tangent(std::size_t i) const { return tangents_[i]; }
  double sample_curvature(std::size_t i) const { return kappa_[i]; }

 private:
  PlanarCurve() = default;

  struct Local {
    std::size_t i0;
    std::size_t i1;
    double u;
  };
  Local locate(double s) const;
  std::optional<TubeCoords> newton(Vec2 z, double s0, double bracket) const;
  TubeCoords tube_coords(Vec2 z, double s) const;

  std::vector<Vec2> points_;
  std::vector<Vec2> tangents_;
  std::vector<double> kappa_;
  double ds_ = 0.0;
  double scale_ = 1.0;
  double tube_radius_ = 0.0;
  double max_kappa_ = 0.0;
  double max_norm_ = 0.0;
};

}  // namespace glab
