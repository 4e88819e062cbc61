#pragma once

#include <string>
#include <vector>

#include "glab/domain.hpp"
#include "glab/field.hpp"
#include "glab/potential.hpp"
#include "glab/solver.hpp"

namespace glab {

struct BadDisc {
  Vec2 x;
  double radius = 0.0;
  int degree = 0;
  bool degree_defined = false;
};

struct VortexCluster {
  Vec2 a;
  int degree = 0;             // D_j, winding around the cluster
  std::vector<int> members;   // indices into VortexSet::discs
  double extent = 0.0;        // max member distance from a
};

struct VortexSet {
  double eps = 0.0;
  double delta2 = 0.0;
  double lambda = 0.0;
  double gradient_constant = 0.0;  // eps * max |grad u|
  std::vector<BadDisc> discs;
  std::vector<VortexCluster> clusters;
  int bad_nodes = 0;
  bool covered = false;  // inflated discs cover the bad set
  int total_degree() const;
  double sum_degree_squared() const;
};

// dist(u, Gamma) at every lattice node (NaN where u is undefined).
std::vector<double> distance_field(const Field& u);

// lambda <= 0 selects 2 delta2 / (eps max|grad u|). Throws Error(kBoundaryContact)
// when a cluster reaches the domain boundary.
VortexSet bad_discs(const Field& u, double eps, double delta2, double lambda = 0.0);

// Winding of the projected phase along a closed lattice loop (node indices,
// implicitly closed). Throws Error(kOutsideTube) if a loop value leaves the tube.
int winding_number(const Field& u, const std::vector<int>& loop);
// Same on explicit values (closed polygon of points near Gamma).
int winding_number(const PlanarCurve& curve, const std::vector<Vec2>& values);
// Counter-clockwise square loop of half-width `half` nodes about node (ci, cj).
std::vector<int> square_loop(const Grid2D& g, int ci, int cj, int half);
// Degree of the boundary datum from `samples` points along the boundary.
int boundary_degree(const BoundaryDatum& datum, int samples = 4096);

struct PhaseDecomposition {
  std::vector<double> eta;      // per node; NaN off the good set
  std::vector<double> theta;    // vortex angle sum, per node
  std::vector<double> phase;    // eta + theta where defined
  std::vector<std::uint8_t> good;
  std::vector<double> ray_angle;                // alpha_j per cluster
  std::vector<std::vector<int>> ray_nodes;      // R_j
  std::vector<double> ray_integral;             // chosen integral per cluster
  std::vector<double> ray_integral_mean;        // mean over the sampled angles
  double shift = 0.0;                           // multiple of 2 pi added for the normalization
  double eta_sup = 0.0;
  double boundary_min = 0.0;
  double reconstruction_error = 0.0;            // max |tau(e^{i(eta+theta)}) - Pi(u)|
};

// Throws Error(kUnwrapInconsistent) if a plaquette residue appears off the rays.
PhaseDecomposition extract_eta(const Field& u, const VortexSet& v);

// Lifted phase of Pi(u) over a mask by breadth-first unwrapping from `seed`.
// Returns NaN outside the mask; throws Error(kUnwrapInconsistent) on residues.
std::vector<double> lift_phase(const Field& u, const std::vector<std::uint8_t>& mask, int seed);

struct Region {
  bool full_domain = true;
  int i0 = 0, j0 = 0, i1 = 0, j1 = 0;  // inclusive node box when not the full domain
  static Region full() { return {}; }
  static Region box(int i0, int j0, int i1, int j1) { return {false, i0, j0, i1, j1}; }
};

struct MaxPrincipleReport {
  bool passed = false;
  bool phase_bounds = false;     // min/max of phi inside the boundary range +- tau_h
  double tau_h = 0.0;
  double interior_min = 0.0;     // min of phi - m t^2/2 over interior nodes
  double boundary_min = 0.0;     // same over the region boundary
  double interior_max = 0.0;     // max of phi + m t^2/2
  double boundary_max = 0.0;
  double phi_min = 0.0, phi_max = 0.0;
  double boundary_phi_min = 0.0, boundary_phi_max = 0.0;
  double max_dist = 0.0;
  std::string message;
};

// tau_h = tau_scale * h^2 * max |third difference of phi| / h^3.
// Throws Error(kRegionInvalid) if dist(u, Gamma) > delta1 somewhere on the region.
MaxPrincipleReport check_max_principle(const Field& u, const ConstantsTable& k, const Region& region,
                                       double tau_scale = 1.0);
// Same check on a synthetic (phi, t) lattice pair over the region mask.
MaxPrincipleReport check_max_principle_values(const Grid2D& g, const std::vector<double>& phi,
                                              const std::vector<double>& t, const std::vector<std::uint8_t>& mask,
                                              double m, double tau_scale = 1.0);

struct PohozaevReport {
  double potential_term = 0.0;   // integral of W/eps^2
  double boundary_term = 0.0;    // integral of |du/dn|^2 over the boundary
  double lhs = 0.0;
  double rhs = 0.0;
  double identity_residual = 0.0;  // |lhs - rhs| / max(1, |lhs|)
};

PohozaevReport pohozaev(const Field& u, const Potential& w, double eps, const StarDomain& dom);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of the fit
};

// Least squares of energy against |log eps|; throws Error(kInsufficientData) for < 3 points.
ScalingFit energy_scaling(const std::vector<double>& eps, const std::vector<double>& energy);

struct HopfMasses {
  std::vector<double> masses;
  double remainder = 0.0;  // W/eps^2 integrated off the mass discs
  double total = 0.0;
};

// Throws Error(kRegionInvalid) if two mass discs overlap.
HopfMasses hopf_masses(const Field& u, const Potential& w, double eps, const VortexSet& v, double r);
HopfMasses hopf_masses(const Field& u, const Potential& w, double eps, const std::vector<Vec2>& centers, double r);

struct HopfDifferential {
  std::vector<double> re, im;         // omega per node, NaN where undefined
  std::vector<double> residual;       // |d_zbar omega - d_z (2W/eps^2)| per node
  double residual_max = 0.0;          // over nodes at distance >= margin from the boundary
  int nodes = 0;
};

HopfDifferential hopf_differential(const Field& u, const Potential& w, double eps, const StarDomain& dom,
                                   double margin = 0.1);

struct CanonicalVortex {
  Vec2 a;
  int degree = 0;
};

// tau(exp(i(eta + sum D_j theta_j))) with eta discrete harmonic. Throws
// Error(kDegreeMismatch) when the degrees do not sum to d.
Field canonical_map(std::shared_ptr<const Grid2D> grid, std::shared_ptr<const BoundaryDatum> datum,
                    const std::vector<CanonicalVortex>& vortices);

// Bilinear interpolation of a field at a point (NaN if a corner is undefined).
Vec2 sample_bilinear(const Field& u, Vec2 x);

struct RateReport {
  std::vector<double> eps;
  std::vector<double> value_error;     // max |u_eps - u0|
  std::vector<double> gradient_error;  // max |grad (u_eps - u0)|
  std::vector<double> t_amplitude;     // max |t_eps|
  std::vector<double> value_order;     // log2 ratios between consecutive eps
  std::vector<double> gradient_order;
  std::vector<double> t_ratio;
  double floor = 0.0;                  // reference interpolation error estimate
  bool below_floor = false;
};

// Errors of each solution against a reference field (interpolated to each grid).
RateReport convergence_rates(const std::vector<const Field*>& solutions, const std::vector<double>& eps,
                             const Field& reference, double margin = 0.0);

struct BoundednessTerms {
  double t_energy = 0.0;
  double dist_grad = 0.0;
};

BoundednessTerms t_energy_and_dist_grad(const Field& u, double eps, const VortexSet& v);

struct GradientNorms {
  std::vector<double> p;
  std::vector<double> lp;    // ||grad u||_{L^p(Omega)}
  double masked_h1 = 0.0;    // ||grad u||_{L^2} off the discs B_r(a_j)
  double masked_energy = 0.0;
};

GradientNorms lp_gradient_norms(const Field& u, const std::vector<double>& p, const std::vector<Vec2>& centers,
                                double r);

// L2 distance between two fields on the same grid, restricted off the discs.
double masked_l2_distance(const Field& a, const Field& b, const std::vector<Vec2>& centers, double r);

}  // namespace glab
