#include "glab/curve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include "glab/error.hpp"
#include "glab/expr.hpp"

namespace glab {

namespace {

struct Jet {
  Vec2 p;
  Vec2 d1;
  Vec2 d2;
};

// Periodic parametrization theta in [0, period).
struct Parametrization {
  double period = kTwoPi;
  std::function<Jet(double)> eval;
};

// Periodic cubic spline through nodes with strictly increasing knots.
class PeriodicSpline {
 public:
  PeriodicSpline(std::vector<double> knots, std::vector<double> values, double period)
      : t_(std::move(knots)), y_(std::move(values)), period_(period) {
    const std::size_t n = t_.size();
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = (i + 1 < n ? t_[i + 1] : period_) - t_[i];
    std::vector<double> a(n), b(n), c(n), r(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t im = (i + n - 1) % n;
      const std::size_t ip = (i + 1) % n;
      a[i] = h[im];
      b[i] = 2.0 * (h[im] + h[i]);
      c[i] = h[i];
      r[i] = 6.0 * ((y_[ip] - y_[i]) / h[i] - (y_[i] - y_[im]) / h[im]);
    }
    m_ = solve_cyclic(a, b, c, r);
    h_ = std::move(h);
  }

  // value, first and second derivative
  std::array<double, 3> eval(double x) const {
    x = std::fmod(x, period_);
    if (x < 0.0) x += period_;
    const std::size_t n = t_.size();
    std::size_t i = static_cast<std::size_t>(std::upper_bound(t_.begin(), t_.end(), x) - t_.begin());
    i = (i == 0) ? 0 : i - 1;
    const std::size_t ip = (i + 1) % n;
    const double h = h_[i];
    const double A = ((t_[i] + h) - x) / h;
    const double B = 1.0 - A;
    const double v = A * y_[i] + B * y_[ip] + ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[ip]) * h * h / 6.0;
    const double d = (y_[ip] - y_[i]) / h - (3.0 * A * A - 1.0) / 6.0 * h * m_[i] + (3.0 * B * B - 1.0) / 6.0 * h * m_[ip];
    const double dd = A * m_[i] + B * m_[ip];
    return {v, d, dd};
  }

 private:
  static std::vector<double> solve_tridiag(const std::vector<double>& a, const std::vector<double>& b,
                                           const std::vector<double>& c, const std::vector<double>& r) {
    const std::size_t n = b.size();
    std::vector<double> cp(n), x(n);
    double beta = b[0];
    x[0] = r[0] / beta;
    for (std::size_t i = 1; i < n; ++i) {
      cp[i] = c[i - 1] / beta;
      beta = b[i] - a[i] * cp[i];
      x[i] = (r[i] - a[i] * x[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i + 1] * x[i + 1];
    return x;
  }

  // Sherman-Morrison on the cyclic tridiagonal system.
  static std::vector<double> solve_cyclic(const std::vector<double>& a, std::vector<double> b,
                                          const std::vector<double>& c, const std::vector<double>& r) {
    const std::size_t n = b.size();
    const double alpha = a[0];
    const double beta = c[n - 1];
    const double gamma = -b[0];
    b[0] -= gamma;
    b[n - 1] -= alpha * beta / gamma;
    std::vector<double> x = solve_tridiag(a, b, c, r);
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = alpha;
    std::vector<double> z = solve_tridiag(a, b, c, u);
    const double fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
    return x;
  }

  std::vector<double> t_, y_, m_, h_;
  double period_;
};

int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  const double tol = 1e-15 * (norm2(b - a) + norm2(c - a));
  if (v > tol) return 1;
  if (v < -tol) return -1;
  return 0;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const int o1 = orientation(p1, p2, q1), o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1), o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

// O(n^2) check over non-adjacent chords of a closed polygon.
bool polygon_self_intersects(const std::vector<Vec2>& pts) {
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = pts[i], b = pts[(i + 1) % n];
    const double minx = std::min(a.x, b.x), maxx = std::max(a.x, b.x);
    const double miny = std::min(a.y, b.y), maxy = std::max(a.y, b.y);
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const Vec2 c = pts[j], d = pts[(j + 1) % n];
      if (std::max(c.x, d.x) < minx || std::min(c.x, d.x) > maxx || std::max(c.y, d.y) < miny ||
          std::min(c.y, d.y) > maxy)
        continue;
      if (segments_intersect(a, b, c, d)) return true;
    }
  }
  return false;
}

constexpr std::array<double, 5> kGaussX = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                           0.9061798459386640};
constexpr std::array<double, 5> kGaussW = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                           0.4786286704993665, 0.2369268850561891};

double speed_integral(const Parametrization& par, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (int k = 0; k < 5; ++k) sum += kGaussW[k] * norm(par.eval(mid + half * kGaussX[k]).d1);
  return sum * half;
}

Parametrization make_parametrization(const CurveSpec& spec) {
  Parametrization par;
  switch (spec.kind) {
    case CurveSpec::Kind::kCircle:
      par.eval = [](double th) {
        const double c = std::cos(th), s = std::sin(th);
        return Jet{{c, s}, {-s, c}, {-c, -s}};
      };
      break;
    case CurveSpec::Kind::kEllipse: {
      if (!(spec.a > 0.0) || !(spec.b > 0.0))
        throw Error(ErrorCode::kInvalidArgument, "ellipse semi-axes must be positive");
      const double a = spec.a, b = spec.b;
      par.eval = [a, b](double th) {
        const double c = std::cos(th), s = std::sin(th);
        return Jet{{a * c, b * s}, {-a * s, b * c}, {-a * c, -b * s}};
      };
      break;
    }
    case CurveSpec::Kind::kRadial: {
      const Expression r = Expression::parse(spec.radius_expr, "theta");
      par.eval = [r](double th) {
        const double c = std::cos(th), s = std::sin(th);
        const double rv = r(th), rd = r.derivative(th);
        const double step = 1e-5;
        const double rdd = (r.derivative(th + step) - r.derivative(th - step)) / (2.0 * step);
        const Vec2 e{c, s}, f{-s, c};
        return Jet{rv * e, rd * e + rv * f, rdd * e + 2.0 * rd * f - rv * e};
      };
      break;
    }
    case CurveSpec::Kind::kPoints: {
      std::vector<Vec2> pts = spec.points;
      if (pts.size() >= 2 && norm(pts.front() - pts.back()) <= 1e-12 * (1.0 + norm(pts.front())))
        pts.pop_back();
      if (pts.size() < 16)
        throw Error(ErrorCode::kTooFewSamples, "point-list curve needs at least 16 distinct points, got " +
                                                   std::to_string(pts.size()));
      std::vector<double> seg(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) seg[i] = norm(pts[(i + 1) % pts.size()] - pts[i]);
      std::vector<double> sorted(seg.begin(), seg.end() - 1);
      std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
      const double median = sorted[sorted.size() / 2];
      if (seg.back() > 4.0 * median)
        throw Error(ErrorCode::kOpenCurve, "point list does not close: gap between last and first point is " +
                                               std::to_string(seg.back()) + " vs median spacing " +
                                               std::to_string(median));
      for (double v : seg)
        if (!(v > 0.0)) throw Error(ErrorCode::kInvalidArgument, "point list has repeated consecutive points");
      if (polygon_self_intersects(pts))
        throw Error(ErrorCode::kSelfIntersection, "point-list curve self-intersects");
      std::vector<double> knots(pts.size());
      double acc = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        knots[i] = acc;
        acc += seg[i];
      }
      std::vector<double> xs(pts.size()), ys(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) {
        xs[i] = pts[i].x;
        ys[i] = pts[i].y;
      }
      auto sx = std::make_shared<PeriodicSpline>(knots, xs, acc);
      auto sy = std::make_shared<PeriodicSpline>(knots, ys, acc);
      par.period = acc;
      par.eval = [sx, sy](double th) {
        const auto x = sx->eval(th), y = sy->eval(th);
        return Jet{{x[0], y[0]}, {x[1], y[1]}, {x[2], y[2]}};
      };
      break;
    }
  }
  return par;
}

struct HermiteBasis {
  double p0, v0, a0, a1, v1, p1;
};

HermiteBasis basis(double u) {
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
  return {1 - 10 * u3 + 15 * u4 - 6 * u5,
          u - 6 * u3 + 8 * u4 - 3 * u5,
          0.5 * (u2 - 3 * u3 + 3 * u4 - u5),
          0.5 * (u3 - 2 * u4 + u5),
          -4 * u3 + 7 * u4 - 3 * u5,
          10 * u3 - 15 * u4 + 6 * u5};
}

HermiteBasis basis_d1(double u) {
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
  return {-30 * u2 + 60 * u3 - 30 * u4,
          1 - 18 * u2 + 32 * u3 - 15 * u4,
          0.5 * (2 * u - 9 * u2 + 12 * u3 - 5 * u4),
          0.5 * (3 * u2 - 8 * u3 + 5 * u4),
          -12 * u2 + 28 * u3 - 15 * u4,
          30 * u2 - 60 * u3 + 30 * u4};
}

HermiteBasis basis_d2(double u) {
  const double u2 = u * u, u3 = u2 * u;
  return {-60 * u + 180 * u2 - 120 * u3,
          -36 * u + 96 * u2 - 60 * u3,
          0.5 * (2 - 18 * u + 36 * u2 - 20 * u3),
          0.5 * (6 * u - 24 * u2 + 20 * u3),
          -24 * u + 84 * u2 - 60 * u3,
          60 * u - 180 * u2 + 120 * u3};
}

}  // namespace

PlanarCurve PlanarCurve::build(const CurveSpec& spec) {
  if (spec.samples < 16)
    throw Error(ErrorCode::kTooFewSamples, "curve needs at least 16 samples, got " + std::to_string(spec.samples));
  const Parametrization par = make_parametrization(spec);
  const std::size_t n = static_cast<std::size_t>(spec.samples);

  // Cumulative arc length on a fine parameter grid.
  const std::size_t m = 8 * n;
  const double dth = par.period / static_cast<double>(m);
  std::vector<double> cum(m + 1, 0.0);
  for (std::size_t j = 0; j < m; ++j) cum[j + 1] = cum[j] + speed_integral(par, j * dth, (j + 1) * dth);
  const double length = cum[m];
  if (!(length > 0.0) || !std::isfinite(length)) throw Error(ErrorCode::kInvalidArgument, "curve has zero length");

  PlanarCurve c;
  c.points_.resize(n);
  c.tangents_.resize(n);
  c.kappa_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double target = length * static_cast<double>(k) / static_cast<double>(n);
    std::size_t j = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin());
    j = std::min(m - 1, j == 0 ? 0 : j - 1);
    double th = j * dth + (target - cum[j]) / std::max(1e-300, norm(par.eval(j * dth).d1));
    for (int it = 0; it < 20; ++it) {
      const double sv = cum[j] + speed_integral(par, j * dth, th);
      const double step = (sv - target) / norm(par.eval(th).d1);
      th -= step;
      if (std::abs(step) < 1e-15 * par.period) break;
    }
    const Jet jet = par.eval(th);
    const double sp = norm(jet.d1);
    c.points_[k] = jet.p;
    c.tangents_[k] = jet.d1 / sp;
    c.kappa_[k] = cross(jet.d1, jet.d2) / (sp * sp * sp);
  }

  // Scale to |curve| = 2 pi about the origin.
  c.scale_ = kTwoPi / length;
  for (std::size_t k = 0; k < n; ++k) {
    c.points_[k] *= c.scale_;
    c.kappa_[k] /= c.scale_;
  }
  c.ds_ = kTwoPi / static_cast<double>(n);

  if (polygon_self_intersects(c.points_)) throw Error(ErrorCode::kSelfIntersection, "curve self-intersects");

  if (c.signed_area() < 0.0) {
    // Reverse orientation, keeping s = 0 at the same point.
    std::vector<Vec2> p(n), t(n);
    std::vector<double> kap(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t src = (n - k) % n;
      p[k] = c.points_[src];
      t[k] = -c.tangents_[src];
      kap[k] = -c.kappa_[src];
    }
    c.points_ = std::move(p);
    c.tangents_ = std::move(t);
    c.kappa_ = std::move(kap);
  }

  for (std::size_t k = 0; k < n; ++k) {
    c.max_kappa_ = std::max(c.max_kappa_, std::abs(c.kappa_[k]));
    c.max_norm_ = std::max(c.max_norm_, norm(c.points_[k]));
  }

  // Tube radius: curvature bound with a safety factor, and half the bottleneck
  // distance between arcs that are at least pi/max|kappa| apart along the curve.
  double radius = 0.9 / std::max(c.max_kappa_, 1e-12);
  const double min_sep = kPi / std::max(c.max_kappa_, 1e-12);
  double bottleneck = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double arc = std::min(j - i, n - (j - i)) * c.ds_;
      if (arc < min_sep) continue;
      bottleneck = std::min(bottleneck, norm(c.points_[i] - c.points_[j]));
    }
  }
  radius = std::min(radius, 0.5 * bottleneck);
  c.tube_radius_ = radius;

  // Spot check that the projection is single valued near the tube edge.
  for (std::size_t k = 0; k < n; k += std::max<std::size_t>(1, n / 64)) {
    for (double sgn : {-1.0, 1.0}) {
      const double s = k * c.ds_;
      const Vec2 z = c.points_[k] + sgn * 0.95 * radius * perp(c.tangents_[k]);
      const TubeCoords tc = c.nearest(z);
      if (std::abs(wrap_angle(tc.s - s)) > 1e-6 || std::abs(tc.t - sgn * 0.95 * radius) > 1e-6)
        throw Error(ErrorCode::kInternal, "tube radius spot check failed at s=" + std::to_string(s));
    }
  }
  return c;
}

double PlanarCurve::signed_area() const {
  double a = 0.0;
  const std::size_t n = points_.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(points_[i], points_[(i + 1) % n]);
  return 0.5 * a;
}

PlanarCurve::Local PlanarCurve::locate(double s) const {
  const std::size_t n = points_.size();
  const double x = mod_two_pi(s) / ds_;
  std::size_t i0 = static_cast<std::size_t>(x);
  if (i0 >= n) i0 = n - 1;
  return {i0, (i0 + 1) % n, x - static_cast<double>(i0)};
}

Vec2 PlanarCurve::tau(double s) const {
  const Local l = locate(s);
  const HermiteBasis h = basis(l.u);
  const double d = ds_;
  const Vec2 a0 = kappa_[l.i0] * perp(tangents_[l.i0]);
  const Vec2 a1 = kappa_[l.i1] * perp(tangents_[l.i1]);
  return h.p0 * points_[l.i0] + (h.v0 * d) * tangents_[l.i0] + (h.a0 * d * d) * a0 + (h.a1 * d * d) * a1 +
         (h.v1 * d) * tangents_[l.i1] + h.p1 * points_[l.i1];
}

Vec2 PlanarCurve::tangent(double s) const {
  const Local l = locate(s);
  const HermiteBasis h = basis_d1(l.u);
  const double d = ds_;
  const Vec2 a0 = kappa_[l.i0] * perp(tangents_[l.i0]);
  const Vec2 a1 = kappa_[l.i1] * perp(tangents_[l.i1]);
  return (h.p0 / d) * points_[l.i0] + h.v0 * tangents_[l.i0] + (h.a0 * d) * a0 + (h.a1 * d) * a1 +
         h.v1 * tangents_[l.i1] + (h.p1 / d) * points_[l.i1];
}

Vec2 PlanarCurve::second_derivative(double s) const {
  const Local l = locate(s);
  const HermiteBasis h = basis_d2(l.u);
  const double d = ds_;
  const Vec2 a0 = kappa_[l.i0] * perp(tangents_[l.i0]);
  const Vec2 a1 = kappa_[l.i1] * perp(tangents_[l.i1]);
  return (h.p0 / (d * d)) * points_[l.i0] + (h.v0 / d) * tangents_[l.i0] + h.a0 * a0 + h.a1 * a1 +
         (h.v1 / d) * tangents_[l.i1] + (h.p1 / (d * d)) * points_[l.i1];
}

double PlanarCurve::curvature(double s) const {
  const Vec2 d1 = tangent(s);
  const double sp = norm(d1);
  return cross(d1, second_derivative(s)) / (sp * sp * sp);
}

Vec2 PlanarCurve::inward_normal(double s) const {
  const Vec2 d1 = tangent(s);
  return perp(d1) / norm(d1);
}

TubeCoords PlanarCurve::tube_coords(Vec2 z, double s) const {
  s = mod_two_pi(s);
  return {s, dot(z - tau(s), inward_normal(s))};
}

std::optional<TubeCoords> PlanarCurve::newton(Vec2 z, double s0, double bracket) const {
  double s = s0;
  bool ok = false;
  for (int it = 0; it < 40; ++it) {
    const Vec2 d = tau(s) - z;
    const Vec2 d1 = tangent(s);
    const double g = dot(d, d1);
    const double gp = dot(d1, d1) + dot(d, second_derivative(s));
    if (!(gp > 0.0)) break;
    double step = g / gp;
    if (std::abs(step) > 4.0 * bracket) step = std::copysign(4.0 * bracket, step);
    s -= step;
    // Rounding in g is ~1e-14; with 1 - t kappa small it inflates the step.
    if (std::abs(step) < 1e-11 || std::abs(g) < 1e-14) {
      ok = true;
      break;
    }
  }
  if (!ok) {
    // Golden-section on the bracketing interval.
    double lo = s0 - bracket, hi = s0 + bracket;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    auto f = [&](double x) { return norm2(tau(x) - z); };
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      if (f1 <= f2) {
        hi = x2; x2 = x1; f2 = f1; x1 = hi - gr * (hi - lo); f1 = f(x1);
      } else {
        lo = x1; x1 = x2; f1 = f2; x2 = lo + gr * (hi - lo); f2 = f(x2);
      }
    }
    s = 0.5 * (lo + hi);
    if (s - lo < 1e-12 * bracket || hi - s < 1e-12 * bracket) return std::nullopt;
  }
  return tube_coords(z, s);
}

TubeCoords PlanarCurve::nearest(Vec2 z) const {
  const std::size_t n = points_.size();
  // Coarse pass; the nearest sample lies within half a stride of a coarse sample
  // that is at most best_coarse + stride*ds away.
  const std::size_t stride = 16;
  double coarse_best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; i += stride) coarse_best = std::min(coarse_best, norm2(points_[i] - z));
  const double reach = std::sqrt(coarse_best) + (static_cast<double>(stride) + 1.0) * ds_;
  const double reach2 = reach * reach;
  std::vector<char> active(n, 0);
  for (std::size_t i = 0; i < n; i += stride) {
    if (norm2(points_[i] - z) > reach2) continue;
    for (std::size_t k = 0; k <= 2 * stride; ++k) active[(i + n + k - stride) % n] = 1;
  }
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    d2[i] = norm2(points_[i] - z);
    if (d2[i] < d2[best]) best = i;
  }
  const double cutoff = std::pow(std::sqrt(d2[best]) + ds_, 2);
  std::vector<std::pair<double, std::size_t>> cands;
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = d2[(i + n - 1) % n], next = d2[(i + 1) % n];
    if (d2[i] > cutoff || d2[i] > prev || d2[i] > next) continue;
    cands.push_back({d2[i], i});
  }
  std::sort(cands.begin(), cands.end());
  if (cands.size() > 8) cands.resize(8);
  TubeCoords out{};
  double out_d = std::numeric_limits<double>::infinity();
  for (const auto& [unused, i] : cands) {
    const auto tc = newton(z, i * ds_, ds_);
    TubeCoords cand = tc ? *tc : tube_coords(z, i * ds_);
    const double dist = norm(z - tau(cand.s));
    if (dist < out_d - 1e-14 || (std::abs(dist - out_d) <= 1e-14 && cand.s < out.s)) {
      out_d = dist;
      out = cand;
    }
  }
  return out;
}

double PlanarCurve::distance(Vec2 z) const { return std::abs(nearest(z).t); }

TubeCoords PlanarCurve::project(Vec2 z) const {
  const TubeCoords tc = nearest(z);
  if (!(std::abs(tc.t) < tube_radius_))
    throw Error(ErrorCode::kOutsideTube, "point (" + std::to_string(z.x) + ", " + std::to_string(z.y) +
                                             ") is at distance " + std::to_string(std::abs(tc.t)) +
                                             ", outside the tube of radius " + std::to_string(tube_radius_));
  return tc;
}

std::optional<TubeCoords> PlanarCurve::project_from(Vec2 z, double s_hint) const {
  auto tc = newton(z, s_hint, 2.0 * ds_);
  if (!tc || !(std::abs(tc->t) < tube_radius_)) return std::nullopt;
  return tc;
}

}  // namespace glab
