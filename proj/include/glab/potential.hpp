#pragma once

#include <array>
#include <memory>
#include <string>

#include "glab/curve.hpp"
#include "glab/expr.hpp"
#include "glab/vec2.hpp"

namespace glab {

// Warm-start state for the nearest-point projection, kept per lattice node by
// the solver so that the hot loop only runs a couple of Newton steps.
struct ProjectionHint {
  double s = 0.0;
  bool valid = false;
};

// A potential W >= 0 vanishing exactly on a closed curve. Immutable.
class Potential {
 public:
  virtual ~Potential() = default;

  virtual double value(Vec2 z, ProjectionHint* hint = nullptr) const = 0;
  virtual Vec2 gradient(Vec2 z, ProjectionHint* hint = nullptr) const = 0;
  virtual void value_and_gradient(Vec2 z, double& w, Vec2& g, ProjectionHint* hint = nullptr) const;
  // Centered differences of the gradient unless overridden.
  virtual Sym2 hessian(Vec2 z, ProjectionHint* hint = nullptr) const;
  // alpha(s, 0) = lim W(tau(s) + t n(s)) / t^2.
  virtual double alpha_at_curve(double s) const = 0;
  virtual std::string kind() const = 0;

  const PlanarCurve& curve() const { return *curve_; }
  std::shared_ptr<const PlanarCurve> curve_ptr() const { return curve_; }
  // Radius beyond which dW/dr >= 0.
  double coercivity_radius() const { return 2.0 * curve_->max_norm(); }

 protected:
  explicit Potential(std::shared_ptr<const PlanarCurve> curve) : curve_(std::move(curve)) {}

 private:
  std::shared_ptr<const PlanarCurve> curve_;
};

// W(u) = (1 - |u|^2)^2 / 4 on the unit circle.
class GinzburgLandauPotential final : public Potential {
 public:
  GinzburgLandauPotential();
  double value(Vec2 z, ProjectionHint* hint = nullptr) const override;
  Vec2 gradient(Vec2 z, ProjectionHint* hint = nullptr) const override;
  void value_and_gradient(Vec2 z, double& w, Vec2& g, ProjectionHint* hint = nullptr) const override;
  Sym2 hessian(Vec2 z, ProjectionHint* hint = nullptr) const override;
  double alpha_at_curve(double) const override { return 1.0; }
  std::string kind() const override { return "gl"; }
};

// In the inner tube W = q(s) t^2. Between blend_inner and blend_outer (in |t|) it
// is blended with a C2 quintic step into the far field q~(z) psi(z), where psi is
// a Gaussian soft-min of squared distances to the curve samples and q~ the
// matching soft average of q. psi grows like |z|^2, so W is coercive.
class CurvePotential final : public Potential {
 public:
  CurvePotential(std::shared_ptr<const PlanarCurve> curve, Expression modulation);

  double value(Vec2 z, ProjectionHint* hint = nullptr) const override;
  Vec2 gradient(Vec2 z, ProjectionHint* hint = nullptr) const override;
  void value_and_gradient(Vec2 z, double& w, Vec2& g, ProjectionHint* hint = nullptr) const override;
  double alpha_at_curve(double s) const override { return modulation_(s); }
  std::string kind() const override { return "curve"; }

  const Expression& modulation() const { return modulation_; }
  double q_min() const { return q_min_; }
  double blend_inner() const { return blend_inner_; }
  double blend_outer() const { return blend_outer_; }
  // Far-field value and gradient, exposed for tests.
  void far_field(Vec2 z, double& w, Vec2& g) const;

 private:
  Expression modulation_;
  double q_min_ = 0.0;
  double blend_inner_ = 0.0;
  double blend_outer_ = 0.0;
  double beta_ = 0.0;
  double log_norm_ = 0.0;
  std::vector<Vec2> soft_points_;
  std::vector<double> soft_q_;
};

std::shared_ptr<const Potential> make_gl_potential();
// Throws Error(kInvalidPotential) if q is not positive or the far field is not.
std::shared_ptr<const Potential> make_curve_potential(std::shared_ptr<const PlanarCurve> curve,
                                                      const Expression& modulation);

struct ValidationReport {
  bool nonnegative = false;
  double min_value = 0.0;
  bool zero_set = false;           // W = 0 on the curve and nowhere else
  double max_on_curve = 0.0;
  double min_off_curve = 0.0;      // min W at distance >= tube_radius/4
  bool nondegenerate = false;
  double mu = 0.0;                 // min W / dist^2 on the half tube
  double mu_delta = 0.0;
  bool coercive = false;
  double coercivity_radius = 0.0;
  double min_radial_derivative = 0.0;  // over R0 <= |z| <= 2 R0
  bool dieudonne = false;
  double dieudonne_M = 0.0;        // sup |grad W|^2 / W over B_R0 minus the curve
  int lattice_points = 0;
  bool passed = false;
  std::string failures;
};

ValidationReport validate_assumptions(const Potential& w, int lattice = 161);

// Coefficients of the Euler-Lagrange system written in tube coordinates.
struct TubeCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double alpha = 0.0;
  double alpha_s = 0.0;
  double alpha_t = 0.0;
};

// Requires |t| < limit (defaults to the tube radius). Derivatives are centered
// differences of the evaluator.
TubeCoefficients compute_coefficients(const Potential& w, double s, double t, double limit = -1.0);

struct ConstantsTable {
  std::array<double, 6> c{};  // c0..c5
  double delta0 = 0.0;
  double delta1 = 0.0;
  double m = 0.0;
  double k = 0.0;
  double dieudonne_M = 0.0;
  double inf_two_alpha = 0.0;
  int s_samples = 0;
  int t_samples = 0;
};

ConstantsTable compute_constants(const Potential& w, int s_samples = 256, int t_samples = 64);

// Left-hand side 2 c4 delta1 + m (m c2 + c3) delta1^3 of the tube-width condition.
double tube_width_condition(const ConstantsTable& k);
// Quarter discriminant of the quadratic form in (|grad phi|, |grad t|) at signed distance t.
double discriminant_quarter(const ConstantsTable& k, double t);

}  // namespace glab
