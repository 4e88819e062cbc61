#include "glab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "glab/error.hpp"

namespace glab {

void Potential::value_and_gradient(Vec2 z, double& w, Vec2& g, ProjectionHint* hint) const {
  w = value(z, hint);
  g = gradient(z, hint);
}

Sym2 Potential::hessian(Vec2 z, ProjectionHint* hint) const {
  const double h = 1e-5 * std::max(1.0, norm(z));
  const Vec2 gxp = gradient(z + Vec2{h, 0.0}, hint);
  const Vec2 gxm = gradient(z - Vec2{h, 0.0}, hint);
  const Vec2 gyp = gradient(z + Vec2{0.0, h}, hint);
  const Vec2 gym = gradient(z - Vec2{0.0, h}, hint);
  const double inv = 0.5 / h;
  const double xx = (gxp.x - gxm.x) * inv;
  const double yy = (gyp.y - gym.y) * inv;
  const double xy = 0.5 * ((gxp.y - gxm.y) + (gyp.x - gym.x)) * inv;
  return {xx, xy, yy};
}

// ---------------------------------------------------------------------------

namespace {
std::shared_ptr<const PlanarCurve> unit_circle() {
  static const auto c = std::make_shared<const PlanarCurve>(PlanarCurve::build(CurveSpec::circle()));
  return c;
}
}  // namespace

GinzburgLandauPotential::GinzburgLandauPotential() : Potential(unit_circle()) {}

double GinzburgLandauPotential::value(Vec2 z, ProjectionHint*) const {
  const double e = 1.0 - norm2(z);
  return 0.25 * e * e;
}

Vec2 GinzburgLandauPotential::gradient(Vec2 z, ProjectionHint*) const {
  return -(1.0 - norm2(z)) * z;
}

void GinzburgLandauPotential::value_and_gradient(Vec2 z, double& w, Vec2& g, ProjectionHint*) const {
  const double e = 1.0 - norm2(z);
  w = 0.25 * e * e;
  g = -e * z;
}

Sym2 GinzburgLandauPotential::hessian(Vec2 z, ProjectionHint*) const {
  const double e = 1.0 - norm2(z);
  return {-e + 2.0 * z.x * z.x, 2.0 * z.x * z.y, -e + 2.0 * z.y * z.y};
}

std::shared_ptr<const Potential> make_gl_potential() {
  return std::make_shared<const GinzburgLandauPotential>();
}

// ---------------------------------------------------------------------------

namespace {

// 1 - smoothstep5 on [lo, hi], with derivative.
void cutoff(double x, double lo, double hi, double& chi, double& dchi) {
  if (x <= lo) {
    chi = 1.0;
    dchi = 0.0;
    return;
  }
  if (x >= hi) {
    chi = 0.0;
    dchi = 0.0;
    return;
  }
  const double w = hi - lo;
  const double u = (x - lo) / w;
  const double s = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
  const double ds = 30.0 * u * u * (1.0 - u) * (1.0 - u) / w;
  chi = 1.0 - s;
  dchi = -ds;
}

}  // namespace

CurvePotential::CurvePotential(std::shared_ptr<const PlanarCurve> curve, Expression modulation)
    : Potential(std::move(curve)), modulation_(std::move(modulation)) {
  const PlanarCurve& c = this->curve();
  const double delta = c.tube_radius();
  blend_inner_ = 0.6 * delta;
  blend_outer_ = 0.95 * delta;

  q_min_ = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4096; ++i) {
    const double q = modulation_(kTwoPi * i / 4096.0);
    if (!std::isfinite(q)) throw Error(ErrorCode::kInvalidPotential, "modulation q(s) is not finite");
    q_min_ = std::min(q_min_, q);
  }
  if (!(q_min_ > 0.0)) {
    std::ostringstream os;
    os << "modulation q(s) must be positive (min sampled value " << q_min_ << ")";
    throw Error(ErrorCode::kInvalidPotential, os.str());
  }

  const double sigma = 0.25 * delta;
  beta_ = 1.0 / (2.0 * sigma * sigma);
  const std::size_t n = c.sample_count();
  const std::size_t stride =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(sigma / (3.0 * c.sample_spacing()))));
  for (std::size_t i = 0; i < n; i += stride) {
    soft_points_.push_back(c.sample_point(i));
    soft_q_.push_back(modulation_(c.sample_spacing() * static_cast<double>(i)));
  }
  const double dsp = kTwoPi / static_cast<double>(soft_points_.size());
  log_norm_ = std::log(dsp * std::sqrt(beta_ / kPi));
}

void CurvePotential::far_field(Vec2 z, double& w, Vec2& g) const {
  double dmin2 = std::numeric_limits<double>::infinity();
  for (const Vec2& p : soft_points_) dmin2 = std::min(dmin2, norm2(z - p));
  double sum = 0.0;
  double sum_q = 0.0;
  Vec2 sum_r{};
  Vec2 sum_qr{};
  for (std::size_t i = 0; i < soft_points_.size(); ++i) {
    const Vec2 r = z - soft_points_[i];
    const double e = norm2(r) - dmin2;
    if (e > 40.0 / beta_) continue;
    const double wi = std::exp(-beta_ * e);
    sum += wi;
    sum_q += wi * soft_q_[i];
    sum_r += wi * r;
    sum_qr += (wi * soft_q_[i]) * r;
  }
  const double psi = dmin2 - (std::log(sum) + log_norm_) / beta_;
  const Vec2 dpsi = (2.0 / sum) * sum_r;
  const double qs = sum_q / sum;
  const Vec2 dq = (-2.0 * beta_ / sum) * (sum_qr - qs * sum_r);
  w = qs * psi;
  g = psi * dq + qs * dpsi;
}

void CurvePotential::value_and_gradient(Vec2 z, double& w, Vec2& g, ProjectionHint* hint) const {
  const PlanarCurve& c = curve();
  std::optional<TubeCoords> tc;
  if (hint && hint->valid) tc = c.project_from(z, hint->s);
  if (!tc || std::abs(tc->t) > blend_inner_) {
    // Lower bound on the distance from the coarse soft-min samples.
    double dmin2 = std::numeric_limits<double>::infinity();
    for (const Vec2& p : soft_points_) dmin2 = std::min(dmin2, norm2(z - p));
    const double spacing = kTwoPi / static_cast<double>(soft_points_.size());
    if (std::sqrt(dmin2) - spacing >= blend_outer_) {
      far_field(z, w, g);
      return;
    }
    if (!tc) {
      const TubeCoords nn = c.nearest(z);
      if (std::abs(nn.t) >= blend_outer_) {
        if (hint) *hint = {nn.s, true};
        far_field(z, w, g);
        return;
      }
      tc = nn;
    }
  }
  if (hint) *hint = {tc->s, true};

  const double s = tc->s;
  const double t = tc->t;
  const double q = modulation_(s);
  const double dq = modulation_.derivative(s);
  const Vec2 n = c.inward_normal(s);
  const Vec2 tan = c.tangent(s);
  const double kappa = c.curvature(s);
  const Vec2 grad_s = tan / (1.0 - t * kappa);
  const double wt = q * t * t;
  const Vec2 gt = (dq * t * t) * grad_s + (2.0 * q * t) * n;

  const double at = std::abs(t);
  if (at <= blend_inner_) {
    w = wt;
    g = gt;
    return;
  }
  double chi = 0.0;
  double dchi = 0.0;
  cutoff(at, blend_inner_, blend_outer_, chi, dchi);
  double wf = 0.0;
  Vec2 gf{};
  far_field(z, wf, gf);
  const Vec2 grad_abs_t = (t > 0.0 ? 1.0 : -1.0) * n;
  w = chi * wt + (1.0 - chi) * wf;
  g = chi * gt + (1.0 - chi) * gf + (dchi * (wt - wf)) * grad_abs_t;
}

double CurvePotential::value(Vec2 z, ProjectionHint* hint) const {
  double w = 0.0;
  Vec2 g{};
  value_and_gradient(z, w, g, hint);
  return w;
}

Vec2 CurvePotential::gradient(Vec2 z, ProjectionHint* hint) const {
  double w = 0.0;
  Vec2 g{};
  value_and_gradient(z, w, g, hint);
  return g;
}

std::shared_ptr<const Potential> make_curve_potential(std::shared_ptr<const PlanarCurve> curve,
                                                      const Expression& modulation) {
  if (!curve) throw Error(ErrorCode::kInvalidArgument, "curve potential needs a curve");
  auto w = std::make_shared<const CurvePotential>(std::move(curve), modulation);
  // The soft-min far field must stay positive away from the curve.
  const double r0 = w->coercivity_radius();
  const double cutoff_dist = w->blend_inner();
  const int n = 121;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec2 z{-2.0 * r0 + 4.0 * r0 * i / (n - 1), -2.0 * r0 + 4.0 * r0 * j / (n - 1)};
      if (w->curve().distance(z) < cutoff_dist) continue;
      double wf = 0.0;
      Vec2 gf{};
      w->far_field(z, wf, gf);
      if (!(wf > 0.0)) {
        std::ostringstream os;
        os << "blended far field is not positive at (" << z.x << ", " << z.y << ")";
        throw Error(ErrorCode::kInvalidPotential, os.str());
      }
    }
  }
  return w;
}

// ---------------------------------------------------------------------------

ValidationReport validate_assumptions(const Potential& w, int lattice) {
  ValidationReport rep;
  const PlanarCurve& c = w.curve();
  const double delta = c.tube_radius();
  const double r0 = w.coercivity_radius();
  rep.coercivity_radius = r0;
  std::ostringstream fail;

  // Lattice over [-2R0, 2R0]^2.
  struct Sample {
    Vec2 z;
    double dist;
    double w;
  };
  std::vector<Sample> pts;
  pts.reserve(static_cast<std::size_t>(lattice) * lattice);
  for (int i = 0; i < lattice; ++i) {
    for (int j = 0; j < lattice; ++j) {
      const Vec2 z{-2.0 * r0 + 4.0 * r0 * i / (lattice - 1), -2.0 * r0 + 4.0 * r0 * j / (lattice - 1)};
      pts.push_back({z, c.distance(z), w.value(z)});
    }
  }
  rep.lattice_points = static_cast<int>(pts.size());

  rep.min_value = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) rep.min_value = std::min(rep.min_value, p.w);

  // Tube samples: (s, t) with 0 < |t| < delta/2.
  const int ns = 256;
  const int nt = 16;
  rep.mu_delta = 0.5 * delta;
  rep.mu = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ns; ++i) {
    const double s = kTwoPi * i / ns;
    const Vec2 p = c.tau(s);
    const Vec2 n = c.inward_normal(s);
    for (int k = 1; k <= nt; ++k) {
      for (int sg = -1; sg <= 1; sg += 2) {
        const double t = sg * rep.mu_delta * k / (nt + 1);
        const double wv = w.value(p + t * n);
        rep.min_value = std::min(rep.min_value, wv);
        rep.mu = std::min(rep.mu, wv / (t * t));
      }
    }
  }
  rep.nonnegative = rep.min_value >= -1e-14;
  if (!rep.nonnegative) fail << "W takes negative values (min " << rep.min_value << "); ";
  rep.nondegenerate = rep.mu > 0.0;
  if (!rep.nondegenerate) fail << "non-degeneracy fails on the half tube (mu " << rep.mu << "); ";

  // Zero set: vanishing on the curve, bounded away from zero off it.
  rep.max_on_curve = 0.0;
  for (std::size_t i = 0; i < c.sample_count(); i += 4) {
    rep.max_on_curve = std::max(rep.max_on_curve, std::abs(w.value(c.sample_point(i))));
  }
  const double off = 0.25 * delta;
  rep.min_off_curve = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, Vec2>> candidates;
  for (const auto& p : pts) {
    if (p.dist < off) continue;
    rep.min_off_curve = std::min(rep.min_off_curve, p.w);
    candidates.push_back({p.w, p.z});
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (candidates.size() > 16) candidates.resize(16);
  const double step0 = 4.0 * r0 / (lattice - 1);
  for (auto [wv, z] : candidates) {
    // Backtracking descent on W from the lowest lattice values.
    double step = step0;
    for (int it = 0; it < 200 && step > 1e-9 * step0; ++it) {
      const Vec2 g = w.gradient(z);
      const double gn = norm(g);
      if (gn == 0.0) break;
      const Vec2 trial = z - (step / gn) * g;
      const double wt = w.value(trial);
      if (wt < wv && c.distance(trial) >= off) {
        z = trial;
        wv = wt;
        step *= 1.5;
      } else {
        step *= 0.5;
      }
    }
    rep.min_off_curve = std::min(rep.min_off_curve, wv);
  }
  rep.zero_set = rep.max_on_curve <= 1e-12 && rep.min_off_curve > 1e-10;
  if (!rep.zero_set) {
    fail << "zero set differs from the curve (max on curve " << rep.max_on_curve << ", min off curve "
         << rep.min_off_curve << "); ";
  }

  // Coercivity on the annulus R0 <= |z| <= 2 R0.
  rep.min_radial_derivative = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 32; ++i) {
    const double r = r0 * (1.0 + i / 32.0);
    for (int k = 0; k < 128; ++k) {
      const double th = kTwoPi * k / 128;
      const Vec2 e{std::cos(th), std::sin(th)};
      rep.min_radial_derivative = std::min(rep.min_radial_derivative, dot(w.gradient(r * e), e));
    }
  }
  rep.coercive = rep.min_radial_derivative >= -1e-12;
  if (!rep.coercive) fail << "radial derivative negative beyond R0 (" << rep.min_radial_derivative << "); ";

  // |grad W|^2 <= M W on B_R0 minus the curve.
  rep.dieudonne_M = 0.0;
  bool finite = true;
  auto ratio_at = [&](Vec2 z) {
    double wv = 0.0;
    Vec2 g{};
    w.value_and_gradient(z, wv, g);
    return wv <= 1e-13 ? -1.0 : norm2(g) / wv;
  };
  std::vector<std::pair<double, Vec2>> peaks;
  auto accumulate = [&](Vec2 z) {
    const double ratio = ratio_at(z);
    if (ratio < 0.0) return;
    if (!std::isfinite(ratio)) finite = false;
    rep.dieudonne_M = std::max(rep.dieudonne_M, ratio);
    peaks.push_back({ratio, z});
  };
  for (const auto& p : pts) {
    if (norm(p.z) <= r0) accumulate(p.z);
  }
  for (int i = 0; i < ns; ++i) {
    const double s = kTwoPi * i / ns;
    for (int k = 1; k <= nt; ++k) {
      for (int sg = -1; sg <= 1; sg += 2) accumulate(c.tau(s) + (sg * 0.9 * delta * k / nt) * c.inward_normal(s));
    }
  }
  // Compass search from the largest samples; the lattice alone underestimates the sup.
  std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  if (peaks.size() > 16) peaks.resize(16);
  for (auto [best, z] : peaks) {
    for (double step = step0; step > 1e-7 * step0;) {
      bool moved = false;
      for (Vec2 d : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}}) {
        const Vec2 trial = z + step * d;
        if (norm(trial) > r0) continue;
        const double r = ratio_at(trial);
        if (r > best) {
          best = r;
          z = trial;
          moved = true;
        }
      }
      if (!moved) step *= 0.5;
    }
    if (!std::isfinite(best)) finite = false;
    rep.dieudonne_M = std::max(rep.dieudonne_M, best);
  }
  rep.dieudonne = finite && std::isfinite(rep.dieudonne_M);
  if (!rep.dieudonne) fail << "|grad W|^2 / W unbounded on B_R0; ";

  rep.passed = rep.nonnegative && rep.zero_set && rep.nondegenerate && rep.coercive && rep.dieudonne;
  rep.failures = fail.str();
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

double alpha_of(const Potential& w, double s, double t) {
  if (std::abs(t) < 1e-7) return w.alpha_at_curve(s);
  const PlanarCurve& c = w.curve();
  ProjectionHint hint{mod_two_pi(s), true};
  return w.value(c.tau(s) + t * c.inward_normal(s), &hint) / (t * t);
}

double a_of(const PlanarCurve& c, double s, double t) {
  const double e = 1.0 - t * c.curvature(s);
  return e * e;
}

}  // namespace

TubeCoefficients compute_coefficients(const Potential& w, double s, double t, double limit) {
  const PlanarCurve& c = w.curve();
  if (limit <= 0.0) limit = c.tube_radius();
  if (!(std::abs(t) < limit)) {
    std::ostringstream os;
    os << "|t| = " << std::abs(t) << " is outside the admissible tube (" << limit << ")";
    throw Error(ErrorCode::kOutsideTube, os.str());
  }
  const double hs = 1e-4;
  const double ht = 1e-4;
  TubeCoefficients r;
  r.a = a_of(c, s, t);
  const double a_s = (a_of(c, s + hs, t) - a_of(c, s - hs, t)) / (2.0 * hs);
  const double a_t = (a_of(c, s, t + ht) - a_of(c, s, t - ht)) / (2.0 * ht);
  r.b = -0.5 * a_s;
  r.c = -0.5 * a_t;
  r.alpha = alpha_of(w, s, t);
  r.alpha_s = (alpha_of(w, s + hs, t) - alpha_of(w, s - hs, t)) / (2.0 * hs);
  r.alpha_t = (alpha_of(w, s, t + ht) - alpha_of(w, s, t - ht)) / (2.0 * ht);
  return r;
}

namespace {

struct Bounds {
  std::array<double, 6> c{};
  double inf_two_alpha = 0.0;
};

Bounds sample_bounds(const Potential& w, double delta0, int ns, int nt) {
  Bounds b;
  double c1 = std::numeric_limits<double>::infinity();
  double inf2a = std::numeric_limits<double>::infinity();
  // The t grid is open at 0 and closed at +-delta0 minus a hair, so the
  // coefficient stencil stays inside the admissible tube.
  const double tmax = delta0 * (1.0 - 1e-6) - 1e-4;
  for (int i = 0; i < ns; ++i) {
    const double s = kTwoPi * i / ns;
    for (int k = 1; k <= nt / 2; ++k) {
      for (int sg = -1; sg <= 1; sg += 2) {
        const double t = sg * tmax * k / (nt / 2);
        const TubeCoefficients co = compute_coefficients(w, s, t);
        const double at = std::abs(t);
        b.c[0] = std::max(b.c[0], std::abs(1.0 - co.a) / at);
        c1 = std::min(c1, 2.0 * co.alpha - std::abs(co.alpha_t * t));
        inf2a = std::min(inf2a, 2.0 * co.alpha);
        b.c[2] = std::max(b.c[2], std::abs(co.c));
        b.c[3] = std::max(b.c[3], std::abs(co.b / co.a) / at);
        b.c[4] = std::max(b.c[4], std::abs(co.c / co.a));
        b.c[5] = std::max(b.c[5], std::abs(co.alpha_s / co.a));
      }
    }
    inf2a = std::min(inf2a, 2.0 * w.alpha_at_curve(s));
  }
  b.c[1] = c1;
  b.inf_two_alpha = inf2a;
  return b;
}

double eq11_lhs(const std::array<double, 6>& c, double m, double d1) {
  return 2.0 * c[4] * d1 + m * (m * c[2] + c[3]) * d1 * d1 * d1;
}

}  // namespace

double tube_width_condition(const ConstantsTable& k) { return eq11_lhs(k.c, k.m, k.delta1); }

double discriminant_quarter(const ConstantsTable& k, double t) {
  const double at = std::abs(t);
  const double p = k.m * (k.m * k.c[2] + k.c[3]);
  return k.c[4] * k.c[4] + p * at - k.k * k.m * (1.0 - 2.0 * k.c[4] * at - p * at * at * at);
}

ConstantsTable compute_constants(const Potential& w, int s_samples, int t_samples) {
  const double delta = w.curve().tube_radius();
  ConstantsTable best;
  bool found = false;
  for (int j = 0; j <= 8; ++j) {
    const double d0 = 0.9 * delta * std::ldexp(1.0, -j);
    const Bounds b = sample_bounds(w, d0, s_samples, t_samples);
    if (!(b.c[1] >= 0.1 * b.inf_two_alpha && b.c[1] > 0.0)) continue;
    ConstantsTable tab;
    tab.c = b.c;
    tab.delta0 = d0;
    tab.inf_two_alpha = b.inf_two_alpha;
    tab.m = std::max(1.1 * b.c[5] / b.c[1], 0.1);
    tab.s_samples = s_samples;
    tab.t_samples = t_samples;
    for (int e = 0; e < 60; ++e) {
      const double d1 = std::ldexp(1.0, -e);
      if (d1 < d0 && eq11_lhs(tab.c, tab.m, d1) < 1.0) {
        tab.delta1 = d1;
        break;
      }
    }
    if (tab.delta1 == 0.0) continue;
    if (!found || tab.delta1 > best.delta1) {
      best = tab;
      found = true;
    }
  }
  if (!found) {
    throw Error(ErrorCode::kDegeneratePotential,
                "no tube width gives 2 alpha - |alpha_t t| bounded below; potential is degenerate");
  }

  // k: smallest value making the quadratic form negative semidefinite on |t| <= delta1, plus 10%.
  const double p = best.m * (best.m * best.c[2] + best.c[3]);
  double kreq = 0.0;
  for (int i = 0; i <= 256; ++i) {
    const double t = best.delta1 * i / 256.0;
    const double den = best.m * (1.0 - 2.0 * best.c[4] * t - p * t * t * t);
    kreq = std::max(kreq, (best.c[4] * best.c[4] + p * t) / den);
  }
  best.k = 1.1 * kreq;

  const ValidationReport rep = validate_assumptions(w, 81);
  best.dieudonne_M = rep.dieudonne_M;
  return best;
}

}  // namespace glab
