#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "glab/curve.hpp"
#include "glab/domain.hpp"
#include "glab/solver.hpp"

namespace glab {

struct PotentialSpec {
  enum class Kind { kGL, kCurve };
  Kind kind = Kind::kGL;
  std::string q = "1";  // kCurve: modulation q(s)
};

struct SolverSpec {
  enum class Method { kSolve, kNewtonRefine };
  double dt = 0.0;  // <= 0 is "auto": eps^2/4
  SolveConfig::Scheme scheme = SolveConfig::Scheme::kSemiImplicit;
  double tol = 1e-8;
  int max_iters = 200000;
  Method method = Method::kSolve;
  bool newton = true;
  double newton_switch = 5.0;
  bool allow_fallback = true;
  bool warm_start = true;
  InitStrategy::Kind init = InitStrategy::Kind::kCanonical;
  std::vector<VortexSeed> vortices;
  double amplitude = 0.1;
};

struct Thresholds {
  double slope_tol = 0.1;
  double mass_tol = 0.15;
  double remainder_frac = 0.1;
  double boundedness_factor = 2.0;
  double value_order_min = 1.5, value_order_max = 2.5;
  double gradient_order_min = 0.5, gradient_order_max = 1.5;
  double hopf_order_min = 1.0;
  double reconstruction_tol = 1e-6;
  double vortex_distance = 2.0;  // in lattice steps
};

struct AnalysisSpec {
  double delta2 = 0.0;  // <= 0 is "auto": 0.5 delta1
  double lambda = 0.0;  // <= 0 is "auto"
  double hopf_radius = 0.3;
  double hopf_margin = 0.1;
  double mask_radius = 0.3;
  double lp = 1.5;
  int reference_grid = 512;
  bool max_principle = true;
  double refinement_eps = 0.0;  // > 0 enables the Hopf refinement pair
  std::vector<int> refinement_grids;
  std::vector<VortexSeed> expect_vortices;
  std::vector<std::string> checks;
  Thresholds thresholds;
};

struct Scenario {
  std::string name;
  std::string origin;    // file the scenario was read from
  CurveSpec curve;
  std::string curve_path;  // kPoints source, as written
  PotentialSpec potential;
  DomainSpec domain;
  int degree = 1;
  std::string eta0 = "0";
  SolverSpec solver;
  std::vector<double> eps;
  int grid = 256;
  std::uint64_t seed = 1;
  AnalysisSpec analysis;
  std::string out_dir = "runs";
  std::vector<std::string> warnings;
};

// Names accepted in analysis.checks and by --checks.
const std::vector<std::string>& known_checks();

// Throws Error(kMissingFile) for an unreadable file and Error(kParse) with
// "origin:line: message" for syntax errors, unknown keys and violated
// constraints.
Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_text(std::string_view text, const std::string& origin, const std::string& base_dir = ".");

// Re-applies the constraint checks after command-line overrides.
void validate_scenario(Scenario& s);

// TOML with every default filled in; the output directory is left out so that
// the hash names the physics, not the location.
std::string canonical_text(const Scenario& s);
std::uint64_t fnv1a64(std::string_view text);
std::string scenario_hash(const Scenario& s);  // 16 hex digits of fnv1a64(canonical_text)

}  // namespace glab
