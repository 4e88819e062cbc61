#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "glab/error.hpp"
#include "glab/scenario.hpp"
#include "glab/sweep.hpp"
#include "json.hpp"

using namespace glab;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const char* kSmall = R"(name = "small"
eps = [0.2, 0.1, 0.05]
grid = 96
[boundary]
degree = 1
[analysis]
checks = ["converged", "degree", "slope", "reconstruction"]
[analysis.thresholds]
slope_tol = 0.6
)";

fs::path scratch(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("glab_test_cli_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ErrorCode code_of(const std::string& text) {
  try {
    parse_scenario_text(text, "t.toml", ".");
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

std::string message_of(const std::string& text) {
  try {
    parse_scenario_text(text, "t.toml", ".");
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults are filled in and echoed") {
  const Scenario s = parse_scenario_text("eps = [0.2, 0.1]\n", "t.toml", ".");
  CHECK(s.grid == 256);
  CHECK(s.degree == 1);
  CHECK(s.solver.dt <= 0.0);
  CHECK(s.analysis.delta2 <= 0.0);
  const std::string c = canonical_text(s);
  CHECK(c.find("dt = \"auto\"") != std::string::npos);
  CHECK(c.find("delta2 = \"auto\"") != std::string::npos);
  CHECK(c.find("kind = \"circle\"") != std::string::npos);
  CHECK(c.find("[output]") == std::string::npos);
}

TEST_CASE("canonical text round-trips with a stable hash") {
  const Scenario s = parse_scenario_text(
      "name = \"e\"\neps = [0.3, 0.15]\ngrid = 96\n[curve]\nkind = \"ellipse\"\na = 1.5\nb = 1\n"
      "[potential]\nkind = \"curve\"\nq = \"1 + 0.5*sin(s)\"\n[boundary]\ndegree = 2\n"
      "[solver]\nvortices = [{x = 0.2, y = 0, degree = 1}, {x = -0.2, y = 0, degree = 1}]\n",
      "t.toml", ".");
  const std::string c = canonical_text(s);
  const Scenario t = parse_scenario_text(c, "c.toml", ".");
  CHECK(canonical_text(t) == c);
  CHECK(scenario_hash(t) == scenario_hash(s));
  CHECK(scenario_hash(s).size() == 16);

  Scenario u = s;
  u.out_dir = "elsewhere";
  CHECK(scenario_hash(u) == scenario_hash(s));
  u.grid = 128;
  CHECK(scenario_hash(u) != scenario_hash(s));
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("scenario errors fail closed") {
  CHECK(code_of("eps = [0.1, 0.2]\n") == ErrorCode::kParse);
  CHECK(message_of("eps = [0.1, 0.2]\n").find("decreasing") != std::string::npos);
  CHECK(code_of("eps = []\n") == ErrorCode::kParse);
  CHECK(code_of("eps = [0.1]\ngrid = 32\n") == ErrorCode::kParse);
  CHECK(code_of("eps = [0.1]\n[potential]\nkind = \"curve\"\n") == ErrorCode::kParse);
  CHECK(code_of("eps = [0.1]\n[curve]\nkind = \"ellipse\"\na = 2\nb = 1\n") == ErrorCode::kParse);
  CHECK(code_of("eps = [0.1]\n[solver]\ninit = \"radial\"\n[boundary]\ndegree = 0\n") == ErrorCode::kParse);
  CHECK(code_of("eps = [0.1]\n[solver]\nvortices = [{x = 0, y = 0, degree = 2}]\n") == ErrorCode::kParse);
  CHECK(code_of("eps = [0.1]\n[analysis]\nchecks = [\"bogus\"]\n") == ErrorCode::kParse);
  CHECK(code_of("eps = \"x\"\n") == ErrorCode::kParse);
  CHECK(code_of("eps = [0.1\n") == ErrorCode::kParse);
  CHECK(code_of("eps = [0.1]\n[domain]\nkind = \"disc\"\nr = -1\n") == ErrorCode::kParse);
}

TEST_CASE("unknown keys are reported with their line") {
  const std::string m = message_of("eps = [0.1]\n\n[solver]\ntol = 1e-8\ntypo = 3\n");
  CHECK(m.find("t.toml:5") != std::string::npos);
  CHECK(m.find("typo") != std::string::npos);
  CHECK(message_of("eps = [0.1]\ncolour = 1\n").find("t.toml:2") != std::string::npos);
  CHECK(message_of("eps = [0.2, 0.3]\n").find("t.toml:1") != std::string::npos);
}

TEST_CASE("coarse grids warn") {
  const Scenario s = parse_scenario_text("eps = [0.05]\ngrid = 64\n", "t.toml", ".");
  REQUIRE(s.warnings.size() == 1);
  CHECK(s.warnings[0].find("h =") != std::string::npos);
  CHECK(parse_scenario_text("eps = [0.05]\ngrid = 128\n", "t.toml", ".").warnings.empty());
}

TEST_CASE("missing scenario file") {
  try {
    parse_scenario("/nonexistent/scenario.toml");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingFile);
  }
}

TEST_CASE("sweep, report and reproducibility") {
  const fs::path out = scratch("sweep");
  const Scenario s = parse_scenario_text(kSmall, "small.toml", ".");
  RunOptions opt;
  opt.out_dir = out.string();
  const RunManifest a = run_sweep(s, opt);
  for (const auto& c : a.checks) CHECK_MESSAGE(c.passed, c.name << ": " << c.detail);
  CHECK(a.passed);
  REQUIRE(fs::exists(a.path));
  CHECK(fs::path(a.dir).parent_path().filename() == scenario_hash(s));
  for (const char* f : {"scenario.toml", "series.csv", "eps-00.json", "eps-00.bin", "eps-00-dist.svg",
                        "eps-00-phase.svg", "eps-01.json"})
    CHECK_MESSAGE(fs::exists(fs::path(a.dir) / f), f);

  const json m = json::parse(slurp(a.path));
  CHECK(m["scenario_hash"] == scenario_hash(s));
  CHECK(m["runs"].size() == 3);
  CHECK(m["checks"].size() == 4);
  CHECK(m["passed"] == true);

  SUBCASE("repeat runs are byte-identical apart from timing") {
    const RunManifest b = run_sweep(s, opt);
    CHECK(b.dir != a.dir);
    CHECK(b.hash == a.hash);
    for (const char* f : {"eps-00.json", "eps-01.json", "eps-00.bin", "series.csv", "scenario.toml"})
      CHECK_MESSAGE(slurp(fs::path(a.dir) / f) == slurp(fs::path(b.dir) / f), f);
    json ma = json::parse(slurp(a.path)), mb = json::parse(slurp(b.path));
    for (json* j : {&ma, &mb}) {
      j->erase("seconds_total");
      for (auto& r : (*j)["runs"]) r.erase("seconds");
    }
    CHECK(ma == mb);
  }

  SUBCASE("report passes on an intact run") {
    const ReportOutcome r = report(a.path);
    CHECK(r.exit_code == 0);
    CHECK(r.checks.size() == 4);
    CHECK(r.text.find("PASS slope") != std::string::npos);
  }

  SUBCASE("report fails on a tampered slope") {
    json t = m;
    t["aggregate"]["energy_scaling"]["slope"] = 50.0;
    std::ofstream(a.path) << t.dump(2);
    const ReportOutcome r = report(a.path);
    CHECK(r.exit_code == 1);
    CHECK(r.text.find("FAIL slope") != std::string::npos);
  }

  SUBCASE("report detects a modified scenario") {
    std::ofstream(fs::path(a.dir) / "scenario.toml") << "eps = [0.2, 0.1, 0.05]\ngrid = 80\n";
    try {
      report(a.path);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInvalidArgument);
    }
  }

  SUBCASE("report detects a missing result file") {
    fs::remove(fs::path(a.dir) / "eps-01.json");
    try {
      report(a.path);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kMissingFile);
    }
  }

  SUBCASE("report on a missing manifest") {
    try {
      report((out / "none" / "manifest.json").string());
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kMissingFile);
    }
  }

  SUBCASE("checks can be overridden and unknown ones are refused") {
    RunOptions o = opt;
    o.override_checks = true;
    o.checks = {"bogus"};
    CHECK_THROWS_AS(run_sweep(s, o), Error);
  }
  fs::remove_all(out);
}

TEST_CASE("an interrupted sweep leaves no manifest") {
  const fs::path out = scratch("interrupt");
  const Scenario s = parse_scenario_text(kSmall, "small.toml", ".");
  RunOptions opt;
  opt.out_dir = out.string();
  int finished = 0;
  opt.progress = [&](const std::string& msg) {
    if (msg.rfind("eps ", 0) == 0 && ++finished == 1) throw std::runtime_error("interrupted");
  };
  CHECK_THROWS_AS(run_sweep(s, opt), std::runtime_error);
  const fs::path dir = out / scenario_hash(s) / "run-001";
  CHECK(fs::exists(dir / "eps-00.json"));
  CHECK_FALSE(fs::exists(dir / "manifest.json"));
  CHECK_FALSE(fs::exists(dir / "eps-01.json"));

  // A new run never reuses the incomplete directory.
  opt.progress = nullptr;
  const RunManifest m = run_sweep(s, opt);
  CHECK(fs::path(m.dir).filename() == "run-002");
  fs::remove_all(out);
}

TEST_CASE("single solve") {
  const fs::path out = scratch("solve");
  const Scenario s = parse_scenario_text(kSmall, "small.toml", ".");
  RunOptions opt;
  opt.out_dir = out.string();
  const SolveOutcome o = run_solve(s, 1, opt);
  CHECK(o.converged);
  REQUIRE(fs::exists(o.result_path));
  const json r = json::parse(slurp(o.result_path));
  CHECK(r["eps"].get<double>() == doctest::Approx(0.1));
  CHECK(r["status"] == "ok");
  CHECK(o.summary.find("converged") != std::string::npos);
  CHECK_THROWS_AS(run_solve(s, 3, opt), Error);
  fs::remove_all(out);
}

TEST_CASE("validation text") {
  const Scenario s = parse_scenario_text(kSmall, "small.toml", ".");
  bool ok = false;
  const std::string t = validation_text(s, ok);
  CHECK(ok);
  CHECK(t.find("delta0") != std::string::npos);
  CHECK(t.find("dt = 0.01") != std::string::npos);
}
