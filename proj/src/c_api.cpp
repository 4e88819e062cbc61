#include "glab.h"

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "glab/curve.hpp"
#include "glab/error.hpp"
#include "glab/scenario.hpp"
#include "glab/sweep.hpp"

using glab::Error;
using glab::ErrorCode;

static_assert(static_cast<int>(ErrorCode::kInvalidArgument) == GLAB_INVALID_ARGUMENT);
static_assert(static_cast<int>(ErrorCode::kOutsideTube) == GLAB_OUTSIDE_TUBE);
static_assert(static_cast<int>(ErrorCode::kDegreeMismatch) == GLAB_DEGREE_MISMATCH);
static_assert(static_cast<int>(ErrorCode::kRegionInvalid) == GLAB_REGION_INVALID);
static_assert(static_cast<int>(ErrorCode::kParse) == GLAB_PARSE);
static_assert(static_cast<int>(ErrorCode::kMissingFile) == GLAB_MISSING_FILE);
static_assert(static_cast<int>(ErrorCode::kInternal) == GLAB_INTERNAL);

struct glab_scenario {
  glab::Scenario s;
  std::string canonical;
  std::string hash;
};

struct glab_options {
  glab::RunOptions opt;
  glab_progress_fn fn = nullptr;
  void* user = nullptr;
};

struct glab_result {
  std::string text;
  std::string path;
  bool passed = false;
  std::vector<glab::CheckResult> checks;
};

struct glab_curve {
  glab::PlanarCurve c;
};

namespace {

thread_local std::string g_error;

template <class F>
glab_status guard(F&& f) {
  try {
    g_error.clear();
    f();
    return GLAB_OK;
  } catch (const Error& e) {
    g_error = e.what();
    return static_cast<glab_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
  } catch (const std::exception& e) {
    g_error = e.what();
  } catch (...) {
    g_error = "unknown error";
  }
  return GLAB_INTERNAL;
}

void need(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

glab::RunOptions run_options(const glab_options* o) {
  if (!o) return {};
  glab::RunOptions r = o->opt;
  if (o->fn) {
    glab_progress_fn fn = o->fn;
    void* user = o->user;
    r.progress = [fn, user](const std::string& m) { fn(m.c_str(), user); };
  }
  return r;
}

}  // namespace

extern "C" {

const char* glab_version(void) { return "0.1.0"; }
const char* glab_last_error(void) { return g_error.c_str(); }

const char* glab_status_name(glab_status status) {
  switch (status) {
    case GLAB_OK: return "ok";
    case GLAB_INVALID_ARGUMENT: return "invalid argument";
    case GLAB_SELF_INTERSECTION: return "self-intersecting curve";
    case GLAB_OPEN_CURVE: return "open curve";
    case GLAB_TOO_FEW_SAMPLES: return "too few samples";
    case GLAB_OUTSIDE_TUBE: return "outside tube";
    case GLAB_INVALID_POTENTIAL: return "invalid potential";
    case GLAB_DEGENERATE_POTENTIAL: return "degenerate potential";
    case GLAB_NOT_STAR_SHAPED: return "domain not star-shaped";
    case GLAB_GRID_TOO_SMALL: return "grid too small";
    case GLAB_DEGREE_MISMATCH: return "degree mismatch";
    case GLAB_DIVERGED: return "diverged";
    case GLAB_LINEAR_SOLVE_FAILED: return "linear solve failed";
    case GLAB_NEWTON_FAILED: return "newton failed";
    case GLAB_REGION_INVALID: return "region invalid";
    case GLAB_BOUNDARY_CONTACT: return "boundary contact";
    case GLAB_UNWRAP_INCONSISTENT: return "unwrap inconsistent";
    case GLAB_INSUFFICIENT_DATA: return "insufficient data";
    case GLAB_PARSE: return "parse error";
    case GLAB_IO: return "i/o error";
    case GLAB_MISSING_FILE: return "missing file";
    case GLAB_INTERNAL: return "internal error";
  }
  return "unknown status";
}

glab_status glab_scenario_load(const char* path, glab_scenario** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new glab_scenario{glab::parse_scenario(path), {}, {}};
  });
}

glab_status glab_scenario_parse(const char* text, const char* origin, glab_scenario** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = new glab_scenario{glab::parse_scenario_text(text, origin ? origin : "<string>"), {}, {}};
  });
}

void glab_scenario_free(glab_scenario* s) { delete s; }

glab_status glab_scenario_set_grid(glab_scenario* s, int n) {
  return guard([&] {
    need(s, "scenario");
    const int old = s->s.grid;
    s->s.grid = n;
    try {
      glab::validate_scenario(s->s);
    } catch (...) {
      s->s.grid = old;
      glab::validate_scenario(s->s);
      throw;
    }
  });
}

glab_status glab_scenario_set_seed(glab_scenario* s, uint64_t seed) {
  return guard([&] {
    need(s, "scenario");
    s->s.seed = seed;
  });
}

glab_status glab_scenario_set_out_dir(glab_scenario* s, const char* dir) {
  return guard([&] {
    need(s, "scenario");
    need(dir, "dir");
    s->s.out_dir = dir;
  });
}

const char* glab_scenario_canonical(glab_scenario* s) {
  if (!s) return "";
  s->canonical = glab::canonical_text(s->s);
  return s->canonical.c_str();
}

const char* glab_scenario_hash(glab_scenario* s) {
  if (!s) return "";
  s->hash = glab::scenario_hash(s->s);
  return s->hash.c_str();
}

int glab_scenario_eps_count(const glab_scenario* s) { return s ? static_cast<int>(s->s.eps.size()) : 0; }

double glab_scenario_eps(const glab_scenario* s, int index) {
  if (!s || index < 0 || index >= static_cast<int>(s->s.eps.size())) return 0.0;
  return s->s.eps[static_cast<std::size_t>(index)];
}

int glab_scenario_warning_count(const glab_scenario* s) { return s ? static_cast<int>(s->s.warnings.size()) : 0; }

const char* glab_scenario_warning(const glab_scenario* s, int index) {
  if (!s || index < 0 || index >= static_cast<int>(s->s.warnings.size())) return "";
  return s->s.warnings[static_cast<std::size_t>(index)].c_str();
}

glab_status glab_options_create(glab_options** out) {
  return guard([&] {
    need(out, "out");
    *out = new glab_options;
  });
}

void glab_options_free(glab_options* o) { delete o; }

glab_status glab_options_set_cold_start(glab_options* o, int cold) {
  return guard([&] {
    need(o, "options");
    o->opt.cold_start = cold != 0;
  });
}

glab_status glab_options_set_checks(glab_options* o, const char* list) {
  return guard([&] {
    need(o, "options");
    need(list, "list");
    std::vector<std::string> names;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
      if (b == std::string::npos) continue;
      item = item.substr(b, e - b + 1);
      const auto& known = glab::known_checks();
      if (std::find(known.begin(), known.end(), item) == known.end())
        throw Error(ErrorCode::kInvalidArgument, "unknown check '" + item + "'");
      names.push_back(item);
    }
    o->opt.override_checks = true;
    o->opt.checks = names;
  });
}

glab_status glab_options_set_progress(glab_options* o, glab_progress_fn fn, void* user) {
  return guard([&] {
    need(o, "options");
    o->fn = fn;
    o->user = user;
  });
}

glab_status glab_solve(const glab_scenario* s, int eps_index, const glab_options* o, glab_result** out) {
  return guard([&] {
    need(s, "scenario");
    need(out, "out");
    if (eps_index < 0) throw Error(ErrorCode::kInvalidArgument, "eps index must be nonnegative");
    const glab::SolveOutcome r = glab::run_solve(s->s, static_cast<std::size_t>(eps_index), run_options(o));
    *out = new glab_result{r.summary, r.result_path, r.converged, {}};
  });
}

glab_status glab_sweep(const glab_scenario* s, const glab_options* o, glab_result** out) {
  return guard([&] {
    need(s, "scenario");
    need(out, "out");
    const glab::RunManifest m = glab::run_sweep(s->s, run_options(o));
    std::ostringstream os;
    for (const auto& c : m.checks) os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    *out = new glab_result{os.str(), m.path, m.passed, m.checks};
  });
}

glab_status glab_report(const char* manifest_path, glab_result** out) {
  return guard([&] {
    need(manifest_path, "manifest_path");
    need(out, "out");
    const glab::ReportOutcome r = glab::report(manifest_path);
    *out = new glab_result{r.text, manifest_path, r.exit_code == 0, r.checks};
  });
}

glab_status glab_validate(const glab_scenario* s, glab_result** out) {
  return guard([&] {
    need(s, "scenario");
    need(out, "out");
    bool ok = false;
    const std::string text = glab::validation_text(s->s, ok);
    *out = new glab_result{text, "", ok, {}};
  });
}

const char* glab_result_text(const glab_result* r) { return r ? r->text.c_str() : ""; }
const char* glab_result_path(const glab_result* r) { return r ? r->path.c_str() : ""; }
int glab_result_passed(const glab_result* r) { return r && r->passed ? 1 : 0; }
int glab_result_check_count(const glab_result* r) { return r ? static_cast<int>(r->checks.size()) : 0; }

const char* glab_result_check_name(const glab_result* r, int index) {
  if (!r || index < 0 || index >= static_cast<int>(r->checks.size())) return "";
  return r->checks[static_cast<std::size_t>(index)].name.c_str();
}

int glab_result_check_passed(const glab_result* r, int index) {
  if (!r || index < 0 || index >= static_cast<int>(r->checks.size())) return 0;
  return r->checks[static_cast<std::size_t>(index)].passed ? 1 : 0;
}

const char* glab_result_check_detail(const glab_result* r, int index) {
  if (!r || index < 0 || index >= static_cast<int>(r->checks.size())) return "";
  return r->checks[static_cast<std::size_t>(index)].detail.c_str();
}

void glab_result_free(glab_result* r) { delete r; }

glab_status glab_curve_circle(glab_curve** out) {
  return guard([&] {
    need(out, "out");
    *out = new glab_curve{glab::PlanarCurve::build(glab::CurveSpec::circle())};
  });
}

glab_status glab_curve_ellipse(double a, double b, glab_curve** out) {
  return guard([&] {
    need(out, "out");
    if (!(a > 0.0 && b > 0.0)) throw Error(ErrorCode::kInvalidArgument, "ellipse semi-axes must be positive");
    *out = new glab_curve{glab::PlanarCurve::build(glab::CurveSpec::ellipse(a, b))};
  });
}

glab_status glab_curve_points(const double* xy, int count, glab_curve** out) {
  return guard([&] {
    need(xy, "xy");
    need(out, "out");
    if (count < 0) throw Error(ErrorCode::kInvalidArgument, "negative point count");
    std::vector<glab::Vec2> pts;
    for (int k = 0; k < count; ++k) pts.push_back({xy[2 * k], xy[2 * k + 1]});
    *out = new glab_curve{glab::PlanarCurve::build(glab::CurveSpec::from_points(std::move(pts)))};
  });
}

void glab_curve_free(glab_curve* c) { delete c; }

double glab_curve_tube_radius(const glab_curve* c) { return c ? c->c.tube_radius() : 0.0; }

glab_status glab_curve_point(const glab_curve* c, double s, double* x, double* y) {
  return guard([&] {
    need(c, "curve");
    need(x, "x");
    need(y, "y");
    const glab::Vec2 p = c->c.tau(s);
    *x = p.x;
    *y = p.y;
  });
}

glab_status glab_curve_tube_coords(const glab_curve* c, double x, double y, double* s, double* t) {
  return guard([&] {
    need(c, "curve");
    need(s, "s");
    need(t, "t");
    const glab::TubeCoords tc = c->c.project({x, y});
    *s = tc.s;
    *t = tc.t;
  });
}

}  // extern "C"
