#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glab/field.hpp"
#include "glab/potential.hpp"

namespace glab {

struct EnergyBreakdown {
  double dirichlet = 0.0;
  double potential = 0.0;        // integral of W(u)/eps^2
  double boundary_normal = 0.0;  // integral over the boundary of |du/dn|^2
  double t_energy = 0.0;         // integral over the good set of |grad t|^2 + t^2/eps^2
  double dist_grad = 0.0;        // integral of |grad dist(u, Gamma)|^2
  double total() const { return dirichlet + potential; }
};

EnergyBreakdown discrete_energy(const Field& u, const Potential& w, double eps);
// Residual -Delta u + a grad W(u)/eps^2 at every unknown: the energy gradient
// divided by h^2.
std::vector<Vec2> discrete_gradient(const Field& u, const Potential& w, double eps);
// sqrt(sum h^2 |r|^2).
double residual_norm(const std::vector<Vec2>& r, double h);

struct SolveConfig {
  enum class Scheme { kSemiImplicit, kExplicit };
  double eps = 0.1;
  double dt = 0.0;  // <= 0 selects eps^2/4, halved whenever the energy rises
  Scheme scheme = Scheme::kSemiImplicit;
  double tol = 1e-8;
  int max_iters = 200000;
  double linear_tol = 1e-8;
  double newton_switch = 5.0;  // flow residual at which Newton takes over
  int newton_max_steps = 40;
  bool newton = true;
  bool allow_fallback = true;  // newton_refine may relax by gradient flow
  double energy_slack = 1e-12;
};

struct SolveResult {
  Field field;
  std::vector<double> residuals;      // one per accepted step
  std::vector<double> energies;
  std::vector<std::uint8_t> newton;   // 1 where the step was a Newton step
  int iterations = 0;
  int flow_steps = 0;
  int newton_steps = 0;
  int linear_iterations = 0;
  bool converged = false;
  bool fallback = false;
  double final_residual = 0.0;
  double dt_used = 0.0;
  std::string message;
};

// Semi-implicit (or explicit) relaxation; stops at residual <= stop (tol when
// stop <= 0) or after max_iters. Throws Error(kDiverged) when the energy rises
// beyond the slack with a fixed step.
SolveResult gradient_flow(const Field& u0, const Potential& w, const SolveConfig& cfg, double stop = -1.0);

// Newton with MINRES on the linearized operator, preconditioned by the
// Laplacian plus |D^2 W|. Falls back to gradient flow when starting above
// newton_switch (if allowed). Throws Error(kLinearSolveFailed) on stagnation.
SolveResult newton_refine(const Field& u0, const Potential& w, const SolveConfig& cfg);

// Flow to newton_switch, then Newton; alternates until tol or budget.
SolveResult solve(const Field& u0, const Potential& w, const SolveConfig& cfg);

struct RadialProfile {
  int degree = 0;
  double eps = 0.0;
  std::vector<double> r;
  std::vector<double> f;
  int newton_iterations = 0;
  double eval(double radius) const;  // linear interpolation, f(r > 1) = 1
};

// Equivariant profile f(r) e^{i d theta} for GL on the unit disc.
RadialProfile solve_radial(int degree, double eps, int points = 2001);

struct VortexSeed {
  Vec2 x;
  int degree;
};

struct InitStrategy {
  enum class Kind { kCanonical, kRadial, kPerturbed };
  Kind kind = Kind::kCanonical;
  std::vector<VortexSeed> vortices;  // canonical/perturbed; empty means degree d at the origin
  double eps = 0.1;                  // radial
  std::uint64_t seed = 1;            // perturbed
  double amplitude = 0.1;            // perturbed
};

// Throws Error(kDegreeMismatch) when the vortex degrees do not sum to d.
Field init_field(std::shared_ptr<const Grid2D> grid, std::shared_ptr<const BoundaryDatum> datum,
                 const InitStrategy& strategy);

// Checkpoint layout, little-endian: int64 n, double h, double eps, then
// row-major u1 and u2 over the full lattice (NaN outside).
void write_checkpoint(const std::string& path, const Field& u, double eps);
struct Checkpoint {
  std::int64_t n = 0;
  double h = 0.0;
  double eps = 0.0;
  std::vector<double> u1;
  std::vector<double> u2;
};
Checkpoint read_checkpoint(const std::string& path);
// Loads checkpoint values into a field on the same lattice (unknowns only).
void load_checkpoint(const Checkpoint& ck, Field& u);

}  // namespace glab
