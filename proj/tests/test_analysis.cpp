#include <cmath>
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
  std::shared_ptr<const PlanarCurve> curve;
};

Setup gl_disc(int n, int d, const std::string& eta0 = "0") {
  auto c = std::make_shared<const PlanarCurve>(PlanarCurve::build(CurveSpec::circle()));
  return {rasterize(StarDomain::build(DomainSpec::disc()), n),
          std::make_shared<const BoundaryDatum>(c, d, Expression::parse(eta0, "theta")), make_gl_potential(), c};
}

const SolveResult& gl_solution() {
  static const SolveResult r = [] {
    const auto s = gl_disc(96, 1);
    SolveConfig cfg;
    cfg.eps = 0.1;
    return solve(canonical_map(s.grid, s.datum, {{{0.1, -0.05}, 1}}), *s.w, cfg);
  }();
  return r;
}

int nearest_node(const Grid2D& g, Vec2 x) {
  const int i = static_cast<int>(std::lround((x.x + g.R) / g.h));
  const int j = static_cast<int>(std::lround((x.y + g.R) / g.h));
  return g.node(i, j);
}

std::vector<std::uint8_t> domain_mask(const Grid2D& g) {
  std::vector<std::uint8_t> m(g.n * g.n, 0);
  for (int node : g.node_of) m[node] = 1;
  return m;
}

}  // namespace

TEST_CASE("winding numbers are integral and additive") {
  const auto s = gl_disc(128, 2);
  const Field u = canonical_map(s.grid, s.datum, {{{-0.4, 0.013}, 1}, {{0.4, 0.013}, 1}});
  const Grid2D& g = *s.grid;
  const int half = static_cast<int>(0.25 / g.h);
  for (double x : {-0.4, 0.4}) {
    const int c = nearest_node(g, {x, 0.0});
    CHECK(winding_number(u, square_loop(g, c % g.n, c / g.n, half)) == 1);
  }
  const int c = nearest_node(g, {0.0, 0.0});
  CHECK(winding_number(u, square_loop(g, c % g.n, c / g.n, static_cast<int>(0.6 / g.h))) == 2);
  const int far = nearest_node(g, {0.0, 0.5});
  CHECK(winding_number(u, square_loop(g, far % g.n, far / g.n, static_cast<int>(0.2 / g.h))) == 0);

  Field flat = u;
  for (Vec2& v : flat.values()) v = {1.0, 0.0};
  CHECK(winding_number(flat, square_loop(g, c % g.n, c / g.n, static_cast<int>(0.6 / g.h))) == 0);

  const PlanarCurve ell = PlanarCurve::build(CurveSpec::ellipse(1.5, 1.0));
  for (int d = -2; d <= 3; ++d) {
    std::vector<Vec2> vals;
    for (int k = 0; k < 400; ++k) vals.push_back(ell.tau(d * kTwoPi * k / 400.0 + 0.3 * std::sin(kTwoPi * k / 400.0)));
    CHECK(winding_number(ell, vals) == d);
  }
  std::vector<Vec2> off{{0, 0}, {0.1, 0}, {0, 0.1}};
  CHECK(code_of([&] { winding_number(ell, off); }) == ErrorCode::kOutsideTube);
  CHECK(code_of([&] { square_loop(g, 2, 2, 5); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("bad discs: empty for a vortex-free field, one degree-one cluster for a GL minimizer") {
  const auto s = gl_disc(96, 0, "0.8*sin(theta)");
  const VortexSet none = bad_discs(canonical_map(s.grid, s.datum, {}), 0.1, 0.125);
  CHECK(none.discs.empty());
  CHECK(none.clusters.empty());
  CHECK(none.bad_nodes == 0);
  CHECK(none.total_degree() == 0);

  const auto& r = gl_solution();
  REQUIRE(r.converged);
  const VortexSet v = bad_discs(r.field, 0.1, 0.125);
  CHECK(v.covered);
  REQUIRE(v.clusters.size() == 1);
  CHECK(v.clusters[0].degree == 1);
  CHECK(norm(v.clusters[0].a) < 2.0 * r.field.grid().h);
  CHECK(v.total_degree() == 1);
  CHECK(v.sum_degree_squared() == 1.0);
  CHECK(v.lambda == doctest::Approx(2.0 * 0.125 / v.gradient_constant));
  for (const auto& d : v.discs) CHECK(d.radius > 0.0);
  // Every node with dist > delta2 lies in some disc.
  const auto dist = distance_field(r.field);
  const Grid2D& g = r.field.grid();
  for (int node = 0; node < g.n * g.n; ++node) {
    if (!(dist[node] > 0.125)) continue;
    bool in = false;
    for (const auto& d : v.discs) in = in || norm(g.position(node) - d.x) <= v.lambda * v.eps;
    CHECK(in);
  }
}

TEST_CASE("max principle on synthetic lattice data") {
  const auto g = rasterize(StarDomain::build(DomainSpec::disc()), 128);
  const auto mask = domain_mask(*g);
  const int total = g->n * g->n;
  std::vector<double> phi(total, 0.0), t(total, 0.0);
  for (int k = 0; k < total; ++k) {
    const Vec2 x = g->position(k);
    phi[k] = x.x * x.x * x.x - 3.0 * x.x * x.y * x.y;
  }
  const auto ok = check_max_principle_values(*g, phi, t, mask, 1.0);
  CHECK(ok.passed);
  CHECK(ok.phase_bounds);
  CHECK(ok.tau_h < 1e-2);

  for (int k = 0; k < total; ++k) phi[k] = std::exp(-norm2(g->position(k)) / (2 * 0.09));
  const auto bump = check_max_principle_values(*g, phi, t, mask, 1.0);
  CHECK_FALSE(bump.passed);
  CHECK(bump.interior_max - bump.boundary_max >= 10.0 * bump.tau_h);
}

TEST_CASE("max principle on fields: pass without vortices, region errors otherwise") {
  const auto s = gl_disc(128, 0, "0.8*sin(theta)");
  const ConstantsTable k = compute_constants(*s.w, 128, 32);
  const auto rep = check_max_principle(canonical_map(s.grid, s.datum, {}), k, Region::full());
  CHECK(rep.passed);
  CHECK(rep.phase_bounds);
  CHECK(rep.phi_max <= rep.boundary_phi_max + rep.tau_h);
  CHECK(rep.phi_min >= rep.boundary_phi_min - rep.tau_h);

  const auto& sol = gl_solution();
  CHECK(code_of([&] { check_max_principle(sol.field, k, Region::full()); }) == ErrorCode::kRegionInvalid);
  const auto s1 = gl_disc(128, 1);
  const Field c1 = canonical_map(s1.grid, s1.datum, {{{0.01, 0.013}, 1}});
  CHECK(code_of([&] { check_max_principle(c1, k, Region::full()); }) == ErrorCode::kRegionInvalid);
  // A box away from the vortex is admissible.
  const int i0 = nearest_node(*s1.grid, {0.2, -0.3}), i1 = nearest_node(*s1.grid, {0.6, 0.3});
  const auto box = check_max_principle(c1, k, Region::box(i0 % 128, i0 / 128, i1 % 128, i1 / 128));
  CHECK(box.passed);
  CHECK(code_of([&] { check_max_principle(c1, k, Region::box(5, 5, 2, 2)); }) == ErrorCode::kRegionInvalid);
}

TEST_CASE("phase decomposition of the canonical one-vortex map") {
  const auto s = gl_disc(128, 1);
  const Vec2 a{0.15, -0.1};
  const Field u = canonical_map(s.grid, s.datum, {{a, 1}});
  VortexSet v;
  v.eps = 0.1;
  v.delta2 = 0.125;
  v.discs.push_back({a, 0.05, 1, true});
  v.clusters.push_back({a, 1, {0}, 0.0});
  const auto pd = extract_eta(u, v);
  CHECK(pd.reconstruction_error < 1e-6);
  CHECK(pd.boundary_min >= 0.0);
  CHECK(pd.boundary_min < kTwoPi);
  REQUIRE(pd.ray_integral.size() == 1);
  CHECK(pd.ray_integral[0] <= pd.ray_integral_mean[0] + 1e-12);

  VortexSet empty;
  empty.eps = 0.1;
  CHECK(code_of([&] { extract_eta(u, empty); }) == ErrorCode::kUnwrapInconsistent);
}

TEST_CASE("phase decomposition of a GL minimizer") {
  const auto& r = gl_solution();
  const VortexSet v = bad_discs(r.field, 0.1, 0.125);
  const auto pd = extract_eta(r.field, v);
  REQUIRE(pd.ray_integral.size() == 1);
  CHECK(pd.ray_integral[0] <= pd.ray_integral_mean[0]);
  CHECK(pd.boundary_min >= 0.0);
  CHECK(pd.boundary_min < kTwoPi);
  CHECK(pd.reconstruction_error < 1e-8);
  CHECK(std::abs(pd.shift / kTwoPi - std::round(pd.shift / kTwoPi)) < 1e-9);
  CHECK_FALSE(pd.ray_nodes[0].empty());
}

TEST_CASE("without vortices eta is the lifted phase") {
  const auto s = gl_disc(96, 0, "0.8*sin(theta)");
  const Field u = canonical_map(s.grid, s.datum, {});
  VortexSet v;
  v.eps = 0.1;
  const auto pd = extract_eta(u, v);
  const auto mask = domain_mask(*s.grid);
  const auto lift = lift_phase(u, mask, s.grid->node_of[s.grid->unknowns() / 2]);
  double worst = 0.0;
  for (int node : s.grid->node_of) {
    const double diff = pd.eta[node] - lift[node];
    worst = std::max(worst, std::abs(diff - kTwoPi * std::round(diff / kTwoPi)));
  }
  CHECK(worst < 1e-9);
  // The lifted phase is harmonic, so it stays within the datum range.
  for (int node : s.grid->node_of) CHECK(std::abs(pd.eta[node] - pd.shift) <= 0.8 + 1e-6);
}

TEST_CASE("pohozaev terms vanish for a constant field inside the disc") {
  const auto s = gl_disc(96, 0);
  Field u(s.grid, s.datum);
  for (Vec2& x : u.values()) x = {1.0, 0.0};
  const auto p = pohozaev(u, *s.w, 0.1, StarDomain::build(DomainSpec::disc()));
  CHECK(p.potential_term == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(p.lhs - p.rhs) < 1e-8);
}

TEST_CASE("pohozaev identity holds for the GL minimizer") {
  const auto& r = gl_solution();
  const auto p = pohozaev(r.field, *make_gl_potential(), 0.1, StarDomain::build(DomainSpec::disc()));
  CHECK(p.potential_term > 0.0);
  CHECK(p.identity_residual < 0.05);
}

TEST_CASE("energy scaling fit") {
  std::vector<double> eps{0.2, 0.1, 0.05, 0.025}, e;
  for (double x : eps) e.push_back(kPi * std::abs(std::log(x)) + 2.0);
  const auto f = energy_scaling(eps, e);
  CHECK(f.slope == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.residual < 1e-12);
  CHECK(code_of([] { energy_scaling({0.1, 0.05}, {1.0, 2.0}); }) == ErrorCode::kInsufficientData);
  CHECK(code_of([] { energy_scaling({0.1, 0.1, 0.1}, {1.0, 2.0, 3.0}); }) == ErrorCode::kInsufficientData);
}

TEST_CASE("hopf differential") {
  const StarDomain disc = StarDomain::build(DomainSpec::disc());
  const auto s0 = gl_disc(96, 0);
  Field flat(s0.grid, s0.datum);
  for (Vec2& x : flat.values()) x = {1.0, 0.0};
  const auto h0 = hopf_differential(flat, *s0.w, 0.1, disc);
  CHECK(h0.nodes > 0);
  CHECK(h0.residual_max < 1e-12);

  const auto s = gl_disc(128, 1);
  const Field u = canonical_map(s.grid, s.datum, {{{0.0, 0.0}, 1}});
  const auto hd = hopf_differential(u, *s.w, 0.1, disc);
  const Grid2D& g = *s.grid;
  double worst = 0.0;
  for (int node : g.node_of) {
    const Vec2 x = g.position(node);
    const double r = norm(x);
    if (r < 0.3 || r > 0.8) continue;
    // -1/z^2 = -(conj z)^2 / |z|^4
    const double re = -(x.x * x.x - x.y * x.y) / (r * r * r * r), im = 2.0 * x.x * x.y / (r * r * r * r);
    worst = std::max(worst, std::hypot(hd.re[node] - re, hd.im[node] - im) / (1.0 / (r * r)));
  }
  CHECK(worst < 0.01);
}

TEST_CASE("hopf masses") {
  const auto& r = gl_solution();
  const auto w = make_gl_potential();
  const VortexSet v = bad_discs(r.field, 0.1, 0.125);
  const auto m = hopf_masses(r.field, *w, 0.1, v, 0.3);
  REQUIRE(m.masses.size() == 1);
  CHECK(m.masses[0] > 0.0);
  CHECK(m.total == doctest::Approx(m.masses[0] + m.remainder));
  CHECK(code_of([&] { hopf_masses(r.field, *w, 0.1, std::vector<Vec2>{{0, 0}, {0.3, 0}}, 0.2); }) ==
        ErrorCode::kRegionInvalid);
}

TEST_CASE("canonical map") {
  const auto s0 = gl_disc(96, 0, "0.8*sin(theta)");
  const Field u0 = canonical_map(s0.grid, s0.datum, {});
  double worst = 0.0;
  for (int k = 0; k < s0.grid->unknowns(); ++k) {
    const Vec2 x = s0.grid->position(s0.grid->node_of[k]);
    // Phase 0.8 y is harmonic with the datum's boundary values.
    const Vec2 want{std::cos(0.8 * x.y), std::sin(0.8 * x.y)};
    worst = std::max(worst, norm(u0.values()[k] - want));
  }
  CHECK(worst < 2e-3);

  const auto s1 = gl_disc(96, 1);
  const Field u1 = canonical_map(s1.grid, s1.datum, {{{0.0, 0.0}, 1}});
  worst = 0.0;
  for (int k = 0; k < s1.grid->unknowns(); ++k) {
    const Vec2 x = s1.grid->position(s1.grid->node_of[k]);
    worst = std::max(worst, norm(u1.values()[k] - x / norm(x)));
  }
  CHECK(worst < 1e-9);
  CHECK(code_of([&] { canonical_map(s1.grid, s1.datum, {{{0.0, 0.0}, 2}}); }) == ErrorCode::kDegreeMismatch);
}

TEST_CASE("bilinear sampling is exact on linear fields") {
  const auto s = gl_disc(64, 1);
  Field u(s.grid, s.datum);
  const Grid2D& g = *s.grid;
  for (int k = 0; k < g.unknowns(); ++k) {
    const Vec2 x = g.position(g.node_of[k]);
    u.values()[k] = {2.0 * x.x - x.y + 0.5, 3.0 * x.y};
  }
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ud(-0.6, 0.6);
  for (int k = 0; k < 200; ++k) {
    const Vec2 x{ud(rng), ud(rng)};
    const Vec2 v = sample_bilinear(u, x);
    CHECK(v.x == doctest::Approx(2.0 * x.x - x.y + 0.5).epsilon(1e-12));
    CHECK(v.y == doctest::Approx(3.0 * x.y).epsilon(1e-12));
  }
  CHECK(std::isnan(sample_bilinear(u, {5.0, 0.0}).x));
}

TEST_CASE("convergence rates of synthetic second-order errors") {
  const auto s = gl_disc(96, 0, "0.8*sin(theta)");
  const Field ref = canonical_map(s.grid, s.datum, {});
  std::vector<Field> sols;
  const std::vector<double> eps{0.2, 0.1, 0.05};
  for (double e : eps) {
    Field f = ref;
    for (int k = 0; k < s.grid->unknowns(); ++k) {
      const Vec2 x = s.grid->position(s.grid->node_of[k]);
      f.values()[k] += e * e * Vec2{x.x * x.x, x.y};
    }
    sols.push_back(f);
  }
  const auto rep = convergence_rates({&sols[0], &sols[1], &sols[2]}, eps, ref);
  REQUIRE(rep.value_order.size() == 2);
  for (double o : rep.value_order) CHECK(o == doctest::Approx(2.0).epsilon(1e-6));
  for (double o : rep.gradient_order) CHECK(o == doctest::Approx(2.0).epsilon(0.02));
  CHECK(rep.value_error[0] == doctest::Approx(0.04 * std::sqrt(2.0)).epsilon(0.05));
  CHECK(code_of([&] { convergence_rates({&sols[0]}, {0.1}, ref); }) == ErrorCode::kInsufficientData);
}

TEST_CASE("boundedness terms vanish on Gamma-valued constant fields") {
  const auto s = gl_disc(96, 0);
  Field u(s.grid, s.datum);
  for (Vec2& x : u.values()) x = {1.0, 0.0};
  VortexSet v;
  v.eps = 0.1;
  const auto b = t_energy_and_dist_grad(u, 0.1, v);
  CHECK(b.t_energy == doctest::Approx(0.0));
  CHECK(b.dist_grad == doctest::Approx(0.0));
  for (Vec2& x : u.values()) x = {0.5, 0.0};
  CHECK(t_energy_and_dist_grad(u, 0.1, v).t_energy > 0.0);
}

TEST_CASE("gradient norms of the identity map") {
  const auto s = gl_disc(128, 1);
  const Grid2D& g = *s.grid;
  Field u(s.grid, s.datum);
  for (int k = 0; k < g.unknowns(); ++k) u.values()[k] = g.position(g.node_of[k]);
  const double area = g.domain_area();
  const auto n = lp_gradient_norms(u, {2.0, 4.0}, {}, 0.0);
  CHECK(n.lp[0] == doctest::Approx(std::sqrt(2.0) * std::sqrt(area)).epsilon(0.03));
  CHECK(n.lp[1] == doctest::Approx(std::sqrt(2.0) * std::pow(area, 0.25)).epsilon(0.03));
  CHECK(n.masked_h1 * n.masked_h1 == doctest::Approx(2.0 * kPi).epsilon(0.01));
  CHECK(n.masked_energy == doctest::Approx(0.5 * n.masked_h1 * n.masked_h1));
  const auto m = lp_gradient_norms(u, {2.0}, {{0.0, 0.0}}, 0.5);
  CHECK(m.masked_h1 * m.masked_h1 == doctest::Approx(2.0 * kPi * 0.75).epsilon(0.03));
  CHECK(code_of([&] { lp_gradient_norms(u, {0.5}, {}, 0.0); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("masked L2 distance") {
  const auto s = gl_disc(96, 1);
  const Field a = canonical_map(s.grid, s.datum, {{{0.0, 0.0}, 1}});
  CHECK(masked_l2_distance(a, a, {}, 0.0) == 0.0);
  Field b = a;
  for (Vec2& x : b.values()) x += Vec2{0.1, 0.0};
  CHECK(masked_l2_distance(a, b, {}, 0.0) == doctest::Approx(0.1 * std::sqrt(s.grid->domain_area())));
  CHECK(masked_l2_distance(a, b, {{0.0, 0.0}}, 0.5) < masked_l2_distance(a, b, {}, 0.0));
}
