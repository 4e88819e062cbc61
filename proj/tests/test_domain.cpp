#include <cmath>

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

std::shared_ptr<const PlanarCurve> unit_circle() {
  return std::make_shared<const PlanarCurve>(PlanarCurve::build(CurveSpec::circle()));
}

}  // namespace

TEST_CASE("disc lattice spacing, area and node classification") {
  const auto dom = StarDomain::build(DomainSpec::disc());
  const auto g = rasterize(dom, 128);
  CHECK(g->n == 128);
  CHECK(g->R == doctest::Approx(1.0));
  CHECK(g->h == doctest::Approx(2.0 / 127.0).epsilon(1e-14));
  CHECK(std::abs(g->domain_area() - kPi) < 0.02 * kPi);
  for (int k = 0; k < g->unknowns(); ++k) {
    const Vec2 x = g->position(g->node_of[k]);
    REQUIRE(dom.contains(x));
    CHECK(g->kind[g->node_of[k]] == NodeKind::kInterior);
  }
  for (const auto& a : g->anchors) CHECK(std::abs(norm(a.x) - 1.0) < 1e-12);
  for (const auto& l : g->links) CHECK(l.weight >= 1.0 - 1e-12);
  for (double a : g->area) {
    CHECK(a > 0.0);
    CHECK(a <= 1.0 + 1e-12);
  }
}

TEST_CASE("lattice area converges at first order or better") {
  const auto dom = StarDomain::build(DomainSpec::disc());
  double prev = 0.0;
  for (int n : {64, 128, 256}) {
    const double err = std::abs(rasterize(dom, n)->domain_area() - kPi);
    if (n > 64) CHECK(err < 0.6 * prev);
    prev = err;
  }
}

TEST_CASE("radial star domain area against the polar integral") {
  // (1/2) int (1 + 0.2 cos 3t)^2 dt = pi (1 + 0.02)
  const auto dom = StarDomain::build(DomainSpec::radial("1 + 0.2*cos(3*theta)"));
  CHECK(dom.area() == doctest::Approx(kPi * 1.02).epsilon(1e-9));
  CHECK(dom.max_radius() == doctest::Approx(1.2).epsilon(1e-6));
  CHECK_FALSE(dom.is_disc());
  const auto g = rasterize(dom, 192);
  CHECK(std::abs(g->domain_area() - kPi * 1.02) < 0.02 * kPi * 1.02);
  for (int k = 0; k < g->unknowns(); ++k) REQUIRE(dom.contains(g->position(g->node_of[k])));
  CHECK(dom.contains({0.0, 0.0}));
  CHECK_FALSE(dom.contains({1.2, 0.05}));
  // outward normal is orthogonal to the boundary tangent
  for (double th : {0.1, 1.3, 2.9}) {
    const double d = 1e-6;
    const Vec2 tan = (dom.boundary_point(th + d) - dom.boundary_point(th - d)) / (2 * d);
    CHECK(std::abs(dot(tan, dom.outward_normal(th))) < 1e-6);
    CHECK(norm(tan) == doctest::Approx(dom.speed(th)).epsilon(1e-6));
  }
}

TEST_CASE("domain rejections") {
  CHECK(code_of([] { StarDomain::build(DomainSpec::radial("1 + 0.9*cos(3*theta)")); }) ==
        ErrorCode::kNotStarShaped);
  CHECK(code_of([] { StarDomain::build(DomainSpec::radial("0.5 + cos(theta)")); }) == ErrorCode::kNotStarShaped);
  CHECK(code_of([] { StarDomain::build(DomainSpec::disc(-1.0)); }) == ErrorCode::kInvalidArgument);
  const auto dom = StarDomain::build(DomainSpec::disc());
  CHECK(code_of([&] { rasterize(dom, 32); }) == ErrorCode::kGridTooSmall);
}

TEST_CASE("boundary datum values lie on the curve and carry the degree") {
  const auto c = std::make_shared<const PlanarCurve>(PlanarCurve::build(CurveSpec::ellipse(1.5, 1.0)));
  for (int d = -2; d <= 3; ++d) {
    const BoundaryDatum g(c, d, Expression::parse("0.3*sin(2*theta)", "theta"));
    for (double th : {-3.0, -1.0, 0.0, 0.5, 2.5}) CHECK(c->distance(g.value(th)) < 1e-9);
    CHECK(boundary_degree(g) == d);
  }
  CHECK(code_of([&] { BoundaryDatum(c, 1, Expression::parse("theta", "theta")); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("field stores Dirichlet values at anchors and boundary nodes") {
  const auto dom = StarDomain::build(DomainSpec::disc());
  const auto g = rasterize(dom, 96);
  const auto datum = std::make_shared<const BoundaryDatum>(unit_circle(), 1, Expression());
  const Field u(g, datum);
  for (std::size_t a = 0; a < g->anchors.size(); ++a) {
    const Vec2 x = g->anchors[a].x;
    CHECK(norm(u.anchor_values()[a] - x / norm(x)) < 1e-9);
  }
  int outside = 0;
  for (int node = 0; node < g->n * g->n; ++node) {
    if (!u.defined(node)) {
      ++outside;
      CHECK(std::isnan(u.at_node(node).x));
    }
  }
  CHECK(outside > 0);
  for (int node : g->boundary_nodes) CHECK(u.defined(node));
}
