#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "glab.h"

namespace {

// Exit codes: 0 success, 1 a check failed or a solve did not converge,
// 2 usage or scenario error, 3 missing file or i/o error, 4 other failure.
int exit_for(glab_status st) {
  switch (st) {
    case GLAB_OK: return 0;
    case GLAB_PARSE:
    case GLAB_INVALID_ARGUMENT:
    case GLAB_GRID_TOO_SMALL:
    case GLAB_NOT_STAR_SHAPED:
    case GLAB_DEGREE_MISMATCH: return 2;
    case GLAB_MISSING_FILE:
    case GLAB_IO: return 3;
    default: return 4;
  }
}

int fail(glab_status st) {
  std::fprintf(stderr, "glab: %s: %s\n", glab_status_name(st), glab_last_error());
  return exit_for(st);
}

void progress(const char* msg, void*) { std::fprintf(stderr, "%s\n", msg); }

struct Common {
  std::string scenario;
  int grid = 0;
  std::string out;
  long long seed = -1;
};

void add_common(CLI::App* cmd, Common& c, bool with_out) {
  cmd->add_option("scenario", c.scenario, "Scenario file (TOML)")->required();
  cmd->add_option("--grid", c.grid, "Lattice nodes per side (overrides the scenario)")->check(CLI::Range(64, 8192));
  cmd->add_option("--seed", c.seed, "Seed for perturbed initial data")->check(CLI::NonNegativeNumber);
  if (with_out) cmd->add_option("--out", c.out, "Output directory (overrides the scenario)");
}

glab_status load(const Common& c, glab_scenario** s) {
  glab_status st = glab_scenario_load(c.scenario.c_str(), s);
  if (st != GLAB_OK) return st;
  if (c.grid > 0 && (st = glab_scenario_set_grid(*s, c.grid)) != GLAB_OK) return st;
  if (c.seed >= 0 && (st = glab_scenario_set_seed(*s, static_cast<uint64_t>(c.seed))) != GLAB_OK) return st;
  if (!c.out.empty() && (st = glab_scenario_set_out_dir(*s, c.out.c_str())) != GLAB_OK) return st;
  for (int k = 0; k < glab_scenario_warning_count(*s); ++k) std::fprintf(stderr, "warning: %s\n", glab_scenario_warning(*s, k));
  return GLAB_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vortex analysis of Ginzburg-Landau type critical points with a general vacuum curve"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(glab_version()));

  Common solve_opt, sweep_opt, validate_opt;
  int eps_index = 0;
  bool no_warm = false;
  std::string checks;
  bool checks_given = false;
  std::string manifest;

  CLI::App* solve = app.add_subcommand("solve", "Solve one eps of a scenario and analyse the result");
  add_common(solve, solve_opt, true);
  solve->add_option("--eps-index", eps_index, "Index into the scenario's eps list")->check(CLI::NonNegativeNumber);

  CLI::App* sweep = app.add_subcommand("sweep", "Run the eps ladder, aggregate, and write a manifest");
  add_common(sweep, sweep_opt, true);
  sweep->add_flag("--no-warm-start", no_warm, "Start every eps from the initial data");
  sweep->add_option("--checks", checks, "Comma-separated checks to evaluate (overrides the scenario)")
      ->each([&](const std::string&) { checks_given = true; });

  CLI::App* rep = app.add_subcommand("report", "Summarise a manifest; exit 0 iff all enabled checks pass");
  rep->add_option("manifest", manifest, "manifest.json of a finished sweep")->required();

  CLI::App* validate = app.add_subcommand("validate", "Check a scenario and print it with defaults filled in");
  add_common(validate, validate_opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  glab_status st = GLAB_OK;
  glab_scenario* s = nullptr;
  glab_options* o = nullptr;
  glab_result* r = nullptr;
  int code = 0;

  if (rep->parsed()) {
    if ((st = glab_report(manifest.c_str(), &r)) != GLAB_OK) return fail(st);
    std::fputs(glab_result_text(r), stdout);
    code = glab_result_passed(r) ? 0 : 1;
    glab_result_free(r);
    return code;
  }

  const Common& common = solve->parsed() ? solve_opt : sweep->parsed() ? sweep_opt : validate_opt;
  if ((st = load(common, &s)) != GLAB_OK) return fail(st);

  if (validate->parsed()) {
    st = glab_validate(s, &r);
    if (st == GLAB_OK) {
      std::fputs(glab_result_text(r), stdout);
      code = glab_result_passed(r) ? 0 : 1;
    }
  } else {
    if ((st = glab_options_create(&o)) == GLAB_OK) st = glab_options_set_progress(o, progress, nullptr);
    if (st == GLAB_OK && no_warm) st = glab_options_set_cold_start(o, 1);
    if (st == GLAB_OK && checks_given) st = glab_options_set_checks(o, checks.c_str());
    if (st == GLAB_OK && solve->parsed()) {
      if (eps_index >= glab_scenario_eps_count(s)) {
        std::fprintf(stderr, "glab: --eps-index %d out of range (%d eps values)\n", eps_index, glab_scenario_eps_count(s));
        code = 2;
      } else if ((st = glab_solve(s, eps_index, o, &r)) == GLAB_OK) {
        std::printf("%s\nresult: %s\n", glab_result_text(r), glab_result_path(r));
        code = glab_result_passed(r) ? 0 : 1;
      }
    } else if (st == GLAB_OK) {
      if ((st = glab_sweep(s, o, &r)) == GLAB_OK) {
        std::fputs(glab_result_text(r), stdout);
        std::printf("manifest: %s\n", glab_result_path(r));
        code = glab_result_passed(r) ? 0 : 1;
      }
    }
  }
  if (st != GLAB_OK) code = fail(st);
  glab_result_free(r);
  glab_options_free(o);
  glab_scenario_free(s);
  return code;
}
