#pragma once

#include <functional>
#include <string>
#include <vector>

#include "glab/scenario.hpp"

namespace glab {

struct RunOptions {
  bool cold_start = false;            // overrides solver.warm_start
  bool override_checks = false;
  std::vector<std::string> checks;    // replaces analysis.checks when override_checks
  std::string out_dir;                // empty keeps the scenario value
  std::function<void(const std::string&)> progress;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RunManifest {
  std::string path;  // manifest.json
  std::string dir;   // <out>/<hash>/run-NNN
  std::string hash;
  bool passed = false;
  std::vector<CheckResult> checks;
};

struct SolveOutcome {
  std::string result_path;
  std::string dir;
  bool converged = false;
  std::string summary;
};

struct ReportOutcome {
  std::string text;
  int exit_code = 0;  // 0 iff every enabled check passes
  std::vector<CheckResult> checks;
};

// One eps of the scenario (index into the eps list), written under
// <out>/<hash>/solve-NNN. Failures of individual diagnostics are recorded in
// the result file; solver errors propagate.
SolveOutcome run_solve(const Scenario& s, std::size_t eps_index, const RunOptions& opt = {});

// Full ladder with per-eps persistence and aggregation. Per-eps failures are
// recorded and the sweep continues. The manifest is written last by atomic
// rename, so a run directory without manifest.json is incomplete.
RunManifest run_sweep(const Scenario& s, const RunOptions& opt = {});

// Re-evaluates the enabled checks from a manifest and its result files.
// Throws Error(kMissingFile) if the manifest or a referenced file is absent and
// Error(kInvalidArgument) if the stored scenario no longer matches the hash.
ReportOutcome report(const std::string& manifest_path);

// Defaults, resolved per-eps parameters, potential hypotheses and tube
// constants in human-readable form; `ok` is false when a hypothesis fails.
std::string validation_text(const Scenario& s, bool& ok);

}  // namespace glab
