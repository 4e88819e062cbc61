#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "glab/analysis.hpp"
#include "glab/error.hpp"

using namespace glab;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

struct Setup {
  std::shared_ptr<const Grid2D> grid;
  std::shared_ptr<const BoundaryDatum> datum;
  std::shared_ptr<const Potential> w;
};

Setup gl_disc(int n, int d) {
  auto c = std::make_shared<const PlanarCurve>(PlanarCurve::build(CurveSpec::circle()));
  return {rasterize(StarDomain::build(DomainSpec::disc()), n), std::make_shared<const BoundaryDatum>(c, d, Expression()),
          make_gl_potential()};
}

Setup ellipse_disc(int n, int d) {
  auto c = std::make_shared<const PlanarCurve>(PlanarCurve::build(CurveSpec::ellipse(1.5, 1.0)));
  return {rasterize(StarDomain::build(DomainSpec::disc()), n), std::make_shared<const BoundaryDatum>(c, d, Expression()),
          make_curve_potential(c, Expression::parse("1 + 0.5*sin(s)", "s"))};
}

// Shooting for f'' + f'/r - d^2 f/r^2 = f(f^2-1)/eps^2, f ~ A r^d at 0, f(1) = 1.
struct Shooting {
  int d;
  double eps;
  std::vector<double> r, f;

  double shoot(double A, bool keep) {
    const int steps = 100000;
    const double r0 = 1e-4, hstep = (1.0 - r0) / steps;
    double x = r0, y = A * std::pow(r0, d), yp = d * A * std::pow(r0, d - 1);
    auto rhs = [&](double rr, double a, double b) {
      return -b / rr + d * d * a / (rr * rr) + a * (a * a - 1.0) / (eps * eps);
    };
    if (keep) {
      r.assign(1, x);
      f.assign(1, y);
    }
    for (int k = 0; k < steps; ++k) {
      const double k1 = yp, l1 = rhs(x, y, yp);
      const double k2 = yp + 0.5 * hstep * l1, l2 = rhs(x + 0.5 * hstep, y + 0.5 * hstep * k1, k2);
      const double k3 = yp + 0.5 * hstep * l2, l3 = rhs(x + 0.5 * hstep, y + 0.5 * hstep * k2, k3);
      const double k4 = yp + hstep * l3, l4 = rhs(x + hstep, y + hstep * k3, k4);
      y += hstep / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
      yp += hstep / 6.0 * (l1 + 2 * l2 + 2 * l3 + l4);
      x += hstep;
      if (std::abs(y) > 10.0) return y;
      if (keep) {
        r.push_back(x);
        f.push_back(y);
      }
    }
    return y;
  }

  void solve() {
    double lo = 0.0, hi = 1.0;
    while (shoot(hi, false) < 1.0) hi *= 2.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (shoot(mid, false) < 1.0 ? lo : hi) = mid;
    }
    shoot(0.5 * (lo + hi), true);
  }

  double energy() const {
    double e = 0.0;
    for (std::size_t k = 0; k + 1 < r.size(); ++k) {
      const double rm = 0.5 * (r[k] + r[k + 1]), fm = 0.5 * (f[k] + f[k + 1]);
      const double fp = (f[k + 1] - f[k]) / (r[k + 1] - r[k]);
      const double dens = 0.5 * (fp * fp + d * d * fm * fm / (rm * rm)) + (1 - fm * fm) * (1 - fm * fm) / (4 * eps * eps);
      e += kTwoPi * dens * rm * (r[k + 1] - r[k]);
    }
    return e;
  }
};

Field noisy(const Setup& s, std::mt19937_64& rng, double amp) {
  Field u = canonical_map(s.grid, s.datum, s.datum->degree() ? std::vector<CanonicalVortex>{{{0.05, -0.1}, s.datum->degree()}}
                                                             : std::vector<CanonicalVortex>{});
  std::normal_distribution<double> nd(0.0, amp);
  for (Vec2& v : u.values()) v += Vec2{nd(rng), nd(rng)};
  return u;
}

void gradient_consistency(const Setup& s, double eps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    Field u = noisy(s, rng, 0.3);
    std::vector<Vec2> v(u.values().size());
    for (Vec2& x : v) x = {nd(rng), nd(rng)};
    const auto r = discrete_gradient(u, *s.w, eps);
    const double h2 = s.grid->h * s.grid->h;
    double analytic = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) analytic += h2 * dot(r[k], v[k]);
    const double step = 1e-5;
    Field up = u, um = u;
    for (std::size_t k = 0; k < v.size(); ++k) {
      up.values()[k] += step * v[k];
      um.values()[k] -= step * v[k];
    }
    const double fd = (discrete_energy(up, *s.w, eps).total() - discrete_energy(um, *s.w, eps).total()) / (2 * step);
    worst = std::max(worst, std::abs(fd - analytic) / std::max(std::abs(analytic), 1.0));
  }
  CHECK(worst < 1e-6);
}

}  // namespace

TEST_CASE("energy gradient matches finite differences at random fields") {
  gradient_consistency(gl_disc(64, 1), 0.1, 11);
  gradient_consistency(ellipse_disc(64, 1), 0.1, 12);
}

TEST_CASE("energy breakdown is nonnegative and the residual is the scaled gradient") {
  const auto s = gl_disc(64, 1);
  std::mt19937_64 rng(3);
  const Field u = noisy(s, rng, 0.2);
  const auto e = discrete_energy(u, *s.w, 0.1);
  CHECK(e.dirichlet > 0.0);
  CHECK(e.potential > 0.0);
  CHECK(e.total() == doctest::Approx(e.dirichlet + e.potential));
  const auto r = discrete_gradient(u, *s.w, 0.1);
  double acc = 0.0;
  for (const Vec2& x : r) acc += norm2(x);
  CHECK(residual_norm(r, s.grid->h) == doctest::Approx(std::sqrt(acc) * s.grid->h));
}

TEST_CASE("semi-implicit flow decreases the energy monotonically") {
  const auto s = gl_disc(64, 1);
  std::mt19937_64 rng(5);
  SolveConfig cfg;
  cfg.eps = 0.1;
  cfg.max_iters = 150;
  cfg.tol = 1e-12;
  const auto r = gradient_flow(noisy(s, rng, 0.3), *s.w, cfg);
  REQUIRE(r.energies.size() > 10);
  for (std::size_t k = 1; k < r.energies.size(); ++k)
    CHECK(r.energies[k] <= r.energies[k - 1] + 1e-12 * std::abs(r.energies[k - 1]));
  CHECK(r.residuals.back() < 0.1 * r.residuals.front());
  CHECK(r.dt_used <= 0.25 * cfg.eps * cfg.eps);
}

TEST_CASE("explicit flow with an unstable step reports divergence") {
  const auto s = gl_disc(64, 1);
  std::mt19937_64 rng(6);
  SolveConfig cfg;
  cfg.eps = 0.1;
  cfg.scheme = SolveConfig::Scheme::kExplicit;
  cfg.dt = 0.01;
  cfg.max_iters = 500;
  CHECK(code_of([&] { gradient_flow(noisy(s, rng, 0.3), *s.w, cfg); }) == ErrorCode::kDiverged);
  cfg.dt = 0.0;  // auto step respects the explicit stability bound
  cfg.max_iters = 50;
  const auto r = gradient_flow(noisy(s, rng, 0.3), *s.w, cfg);
  for (std::size_t k = 1; k < r.energies.size(); ++k) CHECK(r.energies[k] <= r.energies[k - 1] * (1 + 1e-12));
}

TEST_CASE("newton converges quadratically from a relaxed state") {
  const auto s = gl_disc(96, 1);
  SolveConfig cfg;
  cfg.eps = 0.1;
  const auto relaxed = gradient_flow(canonical_map(s.grid, s.datum, {{{0, 0}, 1}}), *s.w, cfg, 1.0);
  REQUIRE(relaxed.final_residual <= 1.0);
  const auto r = newton_refine(relaxed.field, *s.w, cfg);
  REQUIRE(r.converged);
  CHECK_FALSE(r.fallback);
  CHECK(r.newton_steps <= 6);
  const auto& res = r.residuals;
  CHECK(res[std::min<std::size_t>(3, res.size() - 1)] < 0.1 * res[0]);
  // Some step in the tail shows r_{k+1} <= C r_k^2 with a modest C.
  bool quadratic = false;
  for (std::size_t k = 1; k + 1 < res.size(); ++k)
    if (res[k] < 1e-2 && res[k + 1] <= 50.0 * res[k] * res[k]) quadratic = true;
  CHECK(quadratic);
  CHECK(r.final_residual <= cfg.tol);
}

TEST_CASE("newton_refine falls back to the flow from a rough start") {
  const auto s = gl_disc(64, 1);
  SolveConfig cfg;
  cfg.eps = 0.1;
  const Field u0 = canonical_map(s.grid, s.datum, {{{0, 0}, 1}});
  auto r = newton_refine(u0, *s.w, cfg);
  CHECK(r.fallback);
  CHECK(r.converged);
  cfg.allow_fallback = false;
  CHECK(code_of([&] { newton_refine(u0, *s.w, cfg); }) == ErrorCode::kNewtonFailed);
}

TEST_CASE("radial profile agrees with a shooting solution") {
  for (int d : {1, 2}) {
    const double eps = 0.1;
    Shooting sh{d, eps, {}, {}};
    sh.solve();
    const auto p = solve_radial(d, eps);
    double worst = 0.0;
    for (std::size_t k = 0; k < sh.r.size(); k += 97) worst = std::max(worst, std::abs(p.eval(sh.r[k]) - sh.f[k]));
    CHECK(worst < 2e-4);
    CHECK(p.f.front() == 0.0);
    CHECK(p.f.back() == 1.0);
    for (std::size_t k = 1; k < p.f.size(); ++k) REQUIRE(p.f[k] > p.f[k - 1]);
    CHECK(p.eval(2.0) == 1.0);
  }
  CHECK(code_of([] { solve_radial(0, 0.1); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("lattice minimizer energy matches the radial energy for d = 1") {
  Shooting sh{1, 0.1, {}, {}};
  sh.solve();
  const double oracle = sh.energy();
  const auto s = gl_disc(128, 1);
  SolveConfig cfg;
  cfg.eps = 0.1;
  const auto r = solve(canonical_map(s.grid, s.datum, {{{0, 0}, 1}}), *s.w, cfg);
  REQUIRE(r.converged);
  CHECK(std::abs(discrete_energy(r.field, *s.w, 0.1).total() - oracle) < 0.005 * oracle);
}

TEST_CASE("radial d = 2 initial field is a critical point after newton refinement") {
  const auto s = gl_disc(128, 2);
  InitStrategy is;
  is.kind = InitStrategy::Kind::kRadial;
  is.eps = 0.1;
  const Field u0 = init_field(s.grid, s.datum, is);
  const int c = s.grid->n / 2;
  CHECK(winding_number(u0, square_loop(*s.grid, c, c, c / 2)) == 2);
  SolveConfig cfg;
  cfg.eps = 0.1;
  const auto r = newton_refine(u0, *s.w, cfg);
  REQUIRE(r.converged);
  const auto v = bad_discs(r.field, 0.1, 0.125);
  REQUIRE(v.clusters.size() == 1);
  CHECK(v.clusters[0].degree == 2);
  CHECK(norm(v.clusters[0].a) < 2 * s.grid->h);
}

TEST_CASE("init strategies") {
  const auto s = gl_disc(64, 1);
  InitStrategy is;
  is.vortices = {{{0.2, 0.0}, 1}, {{-0.2, 0.0}, 1}};
  CHECK(code_of([&] { init_field(s.grid, s.datum, is); }) == ErrorCode::kDegreeMismatch);
  is.vortices = {{{0.2, 0.0}, 2}, {{-0.2, 0.0}, -1}};
  const Field u = init_field(s.grid, s.datum, is);
  for (const Vec2& v : u.values()) CHECK(std::abs(norm(v) - 1.0) < 1e-12);
  is.kind = InitStrategy::Kind::kPerturbed;
  is.vortices.clear();
  is.seed = 9;
  const Field a = init_field(s.grid, s.datum, is), b = init_field(s.grid, s.datum, is);
  CHECK(a.values() == b.values());
  is.seed = 10;
  CHECK_FALSE(init_field(s.grid, s.datum, is).values() == a.values());
  is.kind = InitStrategy::Kind::kRadial;
  const auto s0 = gl_disc(64, 0);
  CHECK(code_of([&] { init_field(s0.grid, s0.datum, is); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("checkpoint round trip") {
  const auto s = gl_disc(64, 1);
  std::mt19937_64 rng(4);
  const Field u = noisy(s, rng, 0.1);
  const auto dir = std::filesystem::temp_directory_path() / "glab_ckpt_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "u.bin").string();
  write_checkpoint(path, u, 0.05);
  CHECK(std::filesystem::file_size(path) == 24 + 16 * 64 * 64);
  const auto ck = read_checkpoint(path);
  CHECK(ck.n == 64);
  CHECK(ck.h == s.grid->h);
  CHECK(ck.eps == 0.05);
  Field back(s.grid, s.datum);
  load_checkpoint(ck, back);
  CHECK(back.values() == u.values());
  const auto other = gl_disc(80, 1);
  Field wrong(other.grid, other.datum);
  CHECK(code_of([&] { load_checkpoint(ck, wrong); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { read_checkpoint((dir / "missing.bin").string()); }) == ErrorCode::kMissingFile);
  std::filesystem::remove_all(dir);
}
