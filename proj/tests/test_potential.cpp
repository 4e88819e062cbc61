#include <cmath>
#include <memory>
#include <random>

#include "doctest.h"
#include "glab/error.hpp"
#include "glab/potential.hpp"

using namespace glab;

namespace {

std::shared_ptr<const PlanarCurve> ellipse_curve() {
  static const auto c = std::make_shared<const PlanarCurve>(PlanarCurve::build(CurveSpec::ellipse(2.0, 1.0)));
  return c;
}

std::shared_ptr<const Potential> ellipse_potential() {
  static const auto w = make_curve_potential(ellipse_curve(), Expression::parse("1+0.5*sin(s)", "s"));
  return w;
}

// GL potential times a factor vanishing at one point off the circle.
class SpuriousZero final : public Potential {
 public:
  SpuriousZero() : Potential(make_gl_potential()->curve_ptr()) {}
  double value(Vec2 z, ProjectionHint*) const override {
    const double r2 = norm2(z - kZero);
    return gl_.value(z) * r2 / (r2 + 0.01);
  }
  Vec2 gradient(Vec2 z, ProjectionHint*) const override {
    const Vec2 d = z - kZero;
    const double r2 = norm2(d);
    const double f = r2 / (r2 + 0.01);
    const Vec2 df = (2.0 * 0.01 / ((r2 + 0.01) * (r2 + 0.01))) * d;
    return f * gl_.gradient(z) + gl_.value(z) * df;
  }
  double alpha_at_curve(double) const override { return 1.0; }
  std::string kind() const override { return "spurious"; }

 private:
  static constexpr Vec2 kZero{0.31, 0.17};
  GinzburgLandauPotential gl_;
};

class Negated final : public Potential {
 public:
  Negated() : Potential(make_gl_potential()->curve_ptr()) {}
  double value(Vec2 z, ProjectionHint*) const override { return -gl_.value(z); }
  Vec2 gradient(Vec2 z, ProjectionHint*) const override { return -gl_.gradient(z); }
  double alpha_at_curve(double) const override { return -1.0; }
  std::string kind() const override { return "negated"; }

 private:
  GinzburgLandauPotential gl_;
};

double fd_relative_error(const Potential& w, Vec2 z) {
  const double h = 1e-6;
  const Vec2 g = w.gradient(z);
  const Vec2 fd{(w.value(z + Vec2{h, 0}) - w.value(z - Vec2{h, 0})) / (2 * h),
                (w.value(z + Vec2{0, h}) - w.value(z - Vec2{0, h})) / (2 * h)};
  return norm(g - fd) / std::max(norm(g), 1e-2);
}

}  // namespace

TEST_CASE("GL potential values") {
  const auto w = make_gl_potential();
  CHECK(w->value({0, 0}) == doctest::Approx(0.25));
  CHECK(w->value({1, 0}) == 0.0);
  CHECK(norm(w->gradient({1, 0})) == 0.0);
  CHECK(w->coercivity_radius() == doctest::Approx(2.0).epsilon(1e-10));
  for (double s : {0.0, 1.0, 3.0}) {
    CHECK(w->alpha_at_curve(s) == 1.0);
    for (double t : {-0.5, -0.1, 0.2, 0.6}) {
      const TubeCoefficients co = compute_coefficients(*w, s, t);
      CHECK(co.alpha == doctest::Approx((2 - t) * (2 - t) / 4).epsilon(1e-10));
      CHECK(co.alpha_t == doctest::Approx(-(2 - t) / 2).epsilon(1e-7));
      CHECK(std::abs(co.alpha_s) < 1e-8);
    }
  }
  // Analytic Hessian against differences of the gradient.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 100; ++k) {
    const Vec2 z{u(rng), u(rng)};
    const Sym2 h = w->hessian(z);
    const Sym2 fd = w->Potential::hessian(z);
    CHECK(h.xx == doctest::Approx(fd.xx).epsilon(1e-6));
    CHECK(h.xy == doctest::Approx(fd.xy).epsilon(1e-6).scale(1.0));
    CHECK(h.yy == doctest::Approx(fd.yy).epsilon(1e-6));
  }
}

TEST_CASE("curve potential on the circle is the squared distance in the tube") {
  const auto circle = std::make_shared<const PlanarCurve>(PlanarCurve::build(CurveSpec::circle()));
  const auto w = make_curve_potential(circle, Expression::constant(1.0));
  CHECK(w->value({1.5, 0.0}) == doctest::Approx(0.25).epsilon(1e-10));
  for (double r : {0.5, 0.7, 1.0, 1.2, 1.5}) {
    for (double th : {0.0, 1.0, 2.5, 5.0}) {
      const Vec2 z{r * std::cos(th), r * std::sin(th)};
      CHECK(w->value(z) == doctest::Approx((1 - r) * (1 - r)).epsilon(1e-9).scale(1e-12));
    }
  }
}

TEST_CASE("ellipse potential vanishes on the curve and is asymmetric") {
  const auto w = ellipse_potential();
  const PlanarCurve& c = w->curve();
  for (std::size_t i = 0; i < c.sample_count(); i += 7) CHECK(std::abs(w->value(c.sample_point(i))) <= 1e-12);
  const double t = 0.1;
  const double wa = w->value(c.tau(kPi / 2) + t * c.inward_normal(kPi / 2));
  const double wb = w->value(c.tau(3 * kPi / 2) + t * c.inward_normal(3 * kPi / 2));
  CHECK(wa == doctest::Approx(1.5 * t * t).epsilon(1e-9));
  CHECK(wb == doctest::Approx(0.5 * t * t).epsilon(1e-9));
  // a = (1 - t kappa)^2 from the curve.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> us(0.0, kTwoPi), ut(-0.8, 0.8);
  for (int k = 0; k < 50; ++k) {
    const double s = us(rng);
    const double tt = ut(rng) * c.tube_radius();
    const TubeCoefficients co = compute_coefficients(*w, s, tt);
    const double e = 1 - tt * c.curvature(s);
    CHECK(co.a == doctest::Approx(e * e).epsilon(1e-10));
    // Factorization W = alpha t^2.
    CHECK(w->value(c.tau(s) + tt * c.inward_normal(s)) == doctest::Approx(co.alpha * tt * tt).epsilon(1e-12));
  }
}

TEST_CASE("gradients match central differences") {
  std::mt19937_64 rng(17);
  for (const auto& w : {make_gl_potential(), ellipse_potential()}) {
    const double r0 = w->coercivity_radius();
    std::uniform_real_distribution<double> u(-r0, r0);
    int tested = 0;
    double worst = 0.0;
    while (tested < 1000) {
      const Vec2 z{u(rng), u(rng)};
      if (norm(z) > r0) continue;
      worst = std::max(worst, fd_relative_error(*w, z));
      ++tested;
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("hints do not change values") {
  const auto w = ellipse_potential();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  ProjectionHint hint;
  for (int k = 0; k < 500; ++k) {
    const Vec2 z{u(rng), 0.5 * u(rng)};
    double w1, w2;
    Vec2 g1, g2;
    w->value_and_gradient(z, w1, g1, &hint);
    w->value_and_gradient(z, w2, g2, nullptr);
    CHECK(w1 == doctest::Approx(w2).epsilon(1e-10).scale(1e-14));
    CHECK(norm(g1 - g2) <= 1e-9 * (1 + norm(g2)));
  }
}

TEST_CASE("validation of the shipped potentials") {
  const ValidationReport gl = validate_assumptions(*make_gl_potential());
  CHECK_MESSAGE(gl.passed, gl.failures);
  // |grad W|^2 / W = 4 |z|^2 <= 4 R0^2 on B_R0.
  CHECK(gl.dieudonne_M <= 16.0 + 1e-9);
  CHECK(gl.dieudonne_M > 15.0);

  const auto w = ellipse_potential();
  const ValidationReport ell = validate_assumptions(*w);
  CHECK_MESSAGE(ell.passed, ell.failures);
  const double qmin = 0.5;
  CHECK(ell.mu >= 0.9 * qmin);

  // Independent dense oracle of W / t^2 on the half tube.
  const PlanarCurve& c = w->curve();
  double mu = 1e300;
  for (int i = 0; i < 1000; ++i) {
    const double s = kTwoPi * (i + 0.37) / 1000;
    for (int k = 1; k <= 50; ++k) {
      for (int sg = -1; sg <= 1; sg += 2) {
        const double t = sg * 0.5 * c.tube_radius() * k / 51.0;
        mu = std::min(mu, w->value(c.tau(s) + t * c.inward_normal(s)) / (t * t));
      }
    }
  }
  CHECK(mu >= 0.9 * qmin);
  CHECK(ell.mu == doctest::Approx(mu).epsilon(1e-3));
}

TEST_CASE("validation catches constructed violations") {
  const ValidationReport sz = validate_assumptions(SpuriousZero());
  CHECK_FALSE(sz.passed);
  CHECK_FALSE(sz.zero_set);
  CHECK(sz.nonnegative);
  const ValidationReport neg = validate_assumptions(Negated());
  CHECK_FALSE(neg.passed);
  CHECK_FALSE(neg.nonnegative);
}

TEST_CASE("non-positive modulation is rejected") {
  try {
    make_curve_potential(ellipse_curve(), Expression::parse("0.5*sin(s)", "s"));
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidPotential);
  }
}

TEST_CASE("coefficients on the circle") {
  const auto w = make_gl_potential();
  const TubeCoefficients co = compute_coefficients(*w, 0.4, 0.1);
  CHECK(co.a == doctest::Approx(0.81).epsilon(1e-9));
  CHECK(co.c == doctest::Approx(0.9).epsilon(1e-8));
  CHECK(std::abs(co.b) < 1e-8);
  CHECK_THROWS_AS(compute_coefficients(*w, 0.0, 0.5, 0.4), Error);
  CHECK_THROWS_AS(compute_coefficients(*w, 0.0, 0.95), Error);
}

TEST_CASE("constants table for GL") {
  const auto w = make_gl_potential();
  const ConstantsTable k = compute_constants(*w);
  CHECK(k.c[3] < 1e-5);
  CHECK(k.c[5] < 1e-6);
  CHECK(k.m == doctest::Approx(0.1));
  // sup |c| = sup |1 - t| = 1 + delta0.
  CHECK(k.c[2] == doctest::Approx(1.0 + k.delta0).epsilon(2e-4));
  CHECK(k.delta1 <= k.delta0);
  CHECK(k.delta0 <= w->curve().tube_radius());
  CHECK(k.c[5] / k.c[1] <= k.m);
  CHECK(2 * k.c[4] * k.delta1 + k.m * (k.m * k.c[2] + k.c[3]) * std::pow(k.delta1, 3) < 1.0);
  CHECK(tube_width_condition(k) < 1.0);
  for (int i = 0; i <= 1000; ++i) {
    const double t = k.delta1 * i / 1000.0;
    CHECK(discriminant_quarter(k, t) <= 0.0);
    CHECK(discriminant_quarter(k, -t) <= 0.0);
    // Expanded form of the same quantity.
    const double lhs = std::pow(k.c[4] + k.k * k.m * t, 2) -
                       (k.k - k.m * k.c[2] * t - k.c[3] * t) * k.m * (1 + k.k * k.m * t * t);
    CHECK(lhs == doctest::Approx(discriminant_quarter(k, t)).epsilon(1e-9).scale(std::abs(k.k)));
  }
  CHECK(k.dieudonne_M > 0.0);
}

TEST_CASE("constants table for the asymmetric ellipse potential") {
  const auto w = ellipse_potential();
  const ConstantsTable k = compute_constants(*w);
  CHECK(k.c[5] > 0.0);
  CHECK(k.c[1] > 0.0);
  CHECK(k.c[5] / k.c[1] <= k.m);
  CHECK(2 * k.c[4] * k.delta1 + k.m * (k.m * k.c[2] + k.c[3]) * std::pow(k.delta1, 3) < 1.0);
  CHECK(k.delta1 < k.delta0);
  for (int i = 0; i <= 200; ++i) CHECK(discriminant_quarter(k, k.delta1 * i / 200.0) <= 0.0);
  MESSAGE("ellipse delta0=" << k.delta0 << " delta1=" << k.delta1 << " m=" << k.m << " k=" << k.k);
}
