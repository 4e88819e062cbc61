#include "glab/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "glab/error.hpp"
#include "third_party/toml.hpp"

namespace glab {

namespace {

[[noreturn]] void fail_at(const std::string& origin, int line, const std::string& msg) {
  std::ostringstream os;
  os << origin << ":" << line << ": " << msg;
  throw Error(ErrorCode::kParse, os.str());
}

int line_of(const toml::node& n) { return static_cast<int>(n.source().begin.line); }

// A TOML table whose keys must all be consumed; leftovers are reported as unknown.
class Reader {
 public:
  Reader(const toml::table& t, std::string path, const std::string& origin, int line)
      : t_(t), path_(std::move(path)), origin_(origin), line_(line) {}

  ~Reader() noexcept(false) {
    if (std::uncaught_exceptions() == 0) finish();
  }

  int line() const { return line_; }
  const std::string& origin() const { return origin_; }
  bool has(std::string_view key) {
    seen_.insert(std::string(key));
    return t_.contains(key);
  }
  const toml::node* node(std::string_view key) {
    seen_.insert(std::string(key));
    return t_.get(key);
  }
  int line_of_key(std::string_view key) const {
    const toml::node* n = t_.get(key);
    return n ? line_of(*n) : line_;
  }
  std::string name(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }

  [[noreturn]] void fail(std::string_view key, const std::string& msg) const {
    fail_at(origin_, line_of_key(key), name(key) + ": " + msg);
  }

  double number(std::string_view key, double def) {
    const toml::node* n = node(key);
    if (!n) return def;
    if (auto v = n->value<double>()) return *v;
    fail(key, "expected a number");
  }
  // "auto" maps to 0.
  double number_or_auto(std::string_view key, double def) {
    const toml::node* n = node(key);
    if (!n) return def;
    if (auto s = n->value<std::string>()) {
      if (*s == "auto") return 0.0;
      fail(key, "expected a number or \"auto\"");
    }
    if (auto v = n->value<double>()) {
      if (!(*v > 0.0)) fail(key, "must be positive or \"auto\"");
      return *v;
    }
    fail(key, "expected a number or \"auto\"");
  }
  std::int64_t integer(std::string_view key, std::int64_t def) {
    const toml::node* n = node(key);
    if (!n) return def;
    if (n->is_integer()) return n->as_integer()->get();
    fail(key, "expected an integer");
  }
  bool boolean(std::string_view key, bool def) {
    const toml::node* n = node(key);
    if (!n) return def;
    if (auto v = n->value<bool>()) return *v;
    fail(key, "expected true or false");
  }
  std::string string(std::string_view key, const std::string& def) {
    const toml::node* n = node(key);
    if (!n) return def;
    if (n->is_string()) return n->as_string()->get();
    fail(key, "expected a string");
  }
  const toml::table* table(std::string_view key) {
    const toml::node* n = node(key);
    if (!n) return nullptr;
    if (!n->is_table()) fail(key, "expected a table");
    return n->as_table();
  }
  const toml::array* array(std::string_view key) {
    const toml::node* n = node(key);
    if (!n) return nullptr;
    if (!n->is_array()) fail(key, "expected an array");
    return n->as_array();
  }
  Reader sub(std::string_view key, const toml::table& t) const { return Reader(t, name(key), origin_, line_of(t)); }

  void finish() {
    for (const auto& [k, v] : t_) {
      const std::string key(k.str());
      if (!seen_.count(key)) fail_at(origin_, line_of(v), "unknown key '" + name(key) + "'");
    }
    seen_.clear();
    for (const auto& [k, v] : t_) seen_.insert(std::string(k.str()));
  }

 private:
  const toml::table& t_;
  std::string path_;
  const std::string& origin_;
  int line_;
  std::set<std::string> seen_;
};

std::vector<VortexSeed> read_vortices(Reader& r, std::string_view key) {
  std::vector<VortexSeed> out;
  const toml::array* a = r.array(key);
  if (!a) return out;
  for (const toml::node& n : *a) {
    if (!n.is_table()) fail_at(r.origin(), line_of(n), r.name(key) + ": expected {x, y, degree} tables");
    Reader v = r.sub(key, *n.as_table());
    VortexSeed s{{v.number("x", 0.0), v.number("y", 0.0)}, static_cast<int>(v.integer("degree", 1))};
    out.push_back(s);
  }
  return out;
}

std::vector<Vec2> read_points_csv(const std::string& path, const std::string& origin, int line) {
  std::ifstream in(path);
  if (!in) fail_at(origin, line, "curve.path: cannot read '" + path + "'");
  std::vector<Vec2> pts;
  std::string row;
  int row_no = 0;
  while (std::getline(in, row)) {
    ++row_no;
    if (row.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(row.begin(), row.end(), ',', ' ');
    std::istringstream is(row);
    Vec2 p;
    std::string extra;
    if (!(is >> p.x >> p.y) || (is >> extra)) {
      std::ostringstream os;
      os << "curve.path: " << path << " row " << row_no << " is not 'x,y'";
      fail_at(origin, line, os.str());
    }
    pts.push_back(p);
  }
  return pts;
}

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  // TOML floats need a fractional part or an exponent.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string vortex_list(const std::vector<VortexSeed>& v) {
  std::string out = "[";
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ", ";
    out += "{x = " + fmt(v[k].x.x) + ", y = " + fmt(v[k].x.y) + ", degree = " + std::to_string(v[k].degree) + "}";
  }
  return out + "]";
}

const char* init_name(InitStrategy::Kind k) {
  switch (k) {
    case InitStrategy::Kind::kRadial: return "radial";
    case InitStrategy::Kind::kPerturbed: return "perturbed";
    default: return "canonical";
  }
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{"converged",   "degree",        "slope",        "vortices",
                                              "hopf_mass",   "boundedness",   "rates",        "max_principle",
                                              "limit_l2",    "hopf_identity", "reconstruction"};
  return names;
}

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot read scenario '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::filesystem::path p(path);
  const std::string base = p.has_parent_path() ? p.parent_path().string() : std::string(".");
  return parse_scenario_text(ss.str(), path, base);
}

Scenario parse_scenario_text(std::string_view text, const std::string& origin, const std::string& base_dir) {
  toml::table root;
  try {
    root = toml::parse(text, origin);
  } catch (const toml::parse_error& e) {
    fail_at(origin, static_cast<int>(e.source().begin.line), std::string(e.description()));
  }
  Scenario s;
  s.origin = origin;
  Reader top(root, "", origin, 1);

  s.name = top.string("name", "scenario");
  if (const toml::array* a = top.array("eps")) {
    for (const toml::node& n : *a) {
      auto v = n.value<double>();
      if (!v) fail_at(origin, line_of(n), "eps: expected numbers");
      s.eps.push_back(*v);
    }
  } else {
    fail_at(origin, 1, "eps: missing (list of decreasing positive values)");
  }
  s.grid = static_cast<int>(top.integer("grid", 256));
  const std::int64_t seed = top.integer("seed", 1);
  if (seed < 0) top.fail("seed", "must be nonnegative");
  s.seed = static_cast<std::uint64_t>(seed);

  // Potential first: it decides whether a curve table is required.
  int potential_line = 1;
  if (const toml::table* t = top.table("potential")) {
    potential_line = line_of(*t);
    Reader r = top.sub("potential", *t);
    const std::string kind = r.string("kind", "gl");
    if (kind == "gl") {
      s.potential.kind = PotentialSpec::Kind::kGL;
    } else if (kind == "curve") {
      s.potential.kind = PotentialSpec::Kind::kCurve;
      s.potential.q = r.string("q", "1");
      try {
        Expression::parse(s.potential.q, "s");
      } catch (const Error& e) {
        r.fail("q", e.what());
      }
    } else {
      r.fail("kind", "expected \"gl\" or \"curve\"");
    }
  }

  const toml::table* ct = top.table("curve");
  if (!ct && s.potential.kind == PotentialSpec::Kind::kCurve)
    fail_at(origin, potential_line, "potential.kind = \"curve\" needs a curve table");
  if (ct) {
    Reader r = top.sub("curve", *ct);
    const std::string kind = r.string("kind", "circle");
    if (kind == "circle") {
      s.curve = CurveSpec::circle();
    } else if (kind == "ellipse") {
      s.curve = CurveSpec::ellipse(r.number("a", 1.0), r.number("b", 1.0));
      if (!(s.curve.a > 0.0 && s.curve.b > 0.0)) r.fail("a", "ellipse semi-axes must be positive");
    } else if (kind == "radial") {
      s.curve = CurveSpec::radial(r.string("r", "1"));
    } else if (kind == "points") {
      if (!r.has("path")) r.fail("path", "points curve needs a path");
      s.curve_path = r.string("path", "");
      const std::filesystem::path cp = std::filesystem::path(base_dir) / s.curve_path;
      s.curve = CurveSpec::from_points(read_points_csv(cp.string(), origin, r.line_of_key("path")));
    } else {
      r.fail("kind", "expected \"circle\", \"ellipse\", \"radial\" or \"points\"");
    }
    s.curve.samples = static_cast<int>(r.integer("samples", s.curve.samples));
    if (s.potential.kind == PotentialSpec::Kind::kGL && s.curve.kind != CurveSpec::Kind::kCircle)
      r.fail("kind", "the gl potential vanishes on the unit circle; use potential.kind = \"curve\" for other curves");
  }

  if (const toml::table* t = top.table("domain")) {
    Reader r = top.sub("domain", *t);
    const std::string kind = r.string("kind", "disc");
    if (kind == "disc") {
      s.domain = DomainSpec::disc(r.number("r", 1.0));
      if (!(s.domain.radius > 0.0)) r.fail("r", "must be positive");
    } else if (kind == "radial") {
      s.domain = DomainSpec::radial(r.string("rho", "1"));
    } else {
      r.fail("kind", "expected \"disc\" or \"radial\"");
    }
  }

  if (const toml::table* t = top.table("boundary")) {
    Reader r = top.sub("boundary", *t);
    s.degree = static_cast<int>(r.integer("degree", 1));
    s.eta0 = r.string("eta0", "0");
    try {
      Expression::parse(s.eta0, "theta");
    } catch (const Error& e) {
      r.fail("eta0", e.what());
    }
  }

  if (const toml::table* t = top.table("solver")) {
    Reader r = top.sub("solver", *t);
    SolverSpec& v = s.solver;
    const std::string method = r.string("method", "solve");
    if (method == "solve") v.method = SolverSpec::Method::kSolve;
    else if (method == "newton_refine") v.method = SolverSpec::Method::kNewtonRefine;
    else r.fail("method", "expected \"solve\" or \"newton_refine\"");
    const std::string init = r.string("init", "canonical");
    if (init == "canonical") v.init = InitStrategy::Kind::kCanonical;
    else if (init == "radial") v.init = InitStrategy::Kind::kRadial;
    else if (init == "perturbed") v.init = InitStrategy::Kind::kPerturbed;
    else r.fail("init", "expected \"canonical\", \"radial\" or \"perturbed\"");
    v.vortices = read_vortices(r, "vortices");
    v.amplitude = r.number("amplitude", v.amplitude);
    v.dt = r.number_or_auto("dt", 0.0);
    const std::string scheme = r.string("scheme", "semi-implicit");
    if (scheme == "semi-implicit") v.scheme = SolveConfig::Scheme::kSemiImplicit;
    else if (scheme == "explicit") v.scheme = SolveConfig::Scheme::kExplicit;
    else r.fail("scheme", "expected \"semi-implicit\" or \"explicit\"");
    v.tol = r.number("tol", v.tol);
    if (!(v.tol > 0.0)) r.fail("tol", "must be positive");
    v.max_iters = static_cast<int>(r.integer("max_iters", v.max_iters));
    if (v.max_iters < 1) r.fail("max_iters", "must be at least 1");
    v.newton = r.boolean("newton", v.newton);
    v.newton_switch = r.number("newton_switch", v.newton_switch);
    if (!(v.newton_switch > 0.0)) r.fail("newton_switch", "must be positive");
    v.allow_fallback = r.boolean("allow_fallback", v.allow_fallback);
    v.warm_start = r.boolean("warm_start", v.warm_start);
  }

  if (const toml::table* t = top.table("analysis")) {
    Reader r = top.sub("analysis", *t);
    AnalysisSpec& a = s.analysis;
    a.delta2 = r.number_or_auto("delta2", 0.0);
    a.lambda = r.number_or_auto("lambda", 0.0);
    a.hopf_radius = r.number("hopf_radius", a.hopf_radius);
    a.hopf_margin = r.number("hopf_margin", a.hopf_margin);
    a.mask_radius = r.number("mask_radius", a.mask_radius);
    a.lp = r.number("lp", a.lp);
    if (!(a.lp >= 1.0)) r.fail("lp", "exponent must be >= 1");
    a.reference_grid = static_cast<int>(r.integer("reference_grid", a.reference_grid));
    a.max_principle = r.boolean("max_principle", a.max_principle);
    a.expect_vortices = read_vortices(r, "expect_vortices");
    if (const toml::array* c = r.array("checks")) {
      for (const toml::node& n : *c) {
        auto v = n.value<std::string>();
        if (!v || std::find(known_checks().begin(), known_checks().end(), *v) == known_checks().end())
          fail_at(origin, line_of(n), "analysis.checks: unknown check" + (v ? " '" + *v + "'" : std::string()));
        a.checks.push_back(*v);
      }
    }
    if (const toml::table* rt = r.table("refinement")) {
      Reader rr = r.sub("refinement", *rt);
      a.refinement_eps = rr.number("eps", 0.1);
      if (const toml::array* g = rr.array("grids")) {
        for (const toml::node& n : *g) {
          if (!n.is_integer()) fail_at(origin, line_of(n), "analysis.refinement.grids: expected integers");
          a.refinement_grids.push_back(static_cast<int>(n.as_integer()->get()));
        }
      }
      if (a.refinement_grids.size() != 2) rr.fail("grids", "expected two grid sizes, coarse then fine");
      if (a.refinement_grids[0] >= a.refinement_grids[1]) rr.fail("grids", "fine grid must follow the coarse one");
      if (!(a.refinement_eps > 0.0)) rr.fail("eps", "must be positive");
    }
    if (const toml::table* tt = r.table("thresholds")) {
      Reader th = r.sub("thresholds", *tt);
      Thresholds& x = a.thresholds;
      x.slope_tol = th.number("slope_tol", x.slope_tol);
      x.mass_tol = th.number("mass_tol", x.mass_tol);
      x.remainder_frac = th.number("remainder_frac", x.remainder_frac);
      x.boundedness_factor = th.number("boundedness_factor", x.boundedness_factor);
      x.value_order_min = th.number("value_order_min", x.value_order_min);
      x.value_order_max = th.number("value_order_max", x.value_order_max);
      x.gradient_order_min = th.number("gradient_order_min", x.gradient_order_min);
      x.gradient_order_max = th.number("gradient_order_max", x.gradient_order_max);
      x.hopf_order_min = th.number("hopf_order_min", x.hopf_order_min);
      x.reconstruction_tol = th.number("reconstruction_tol", x.reconstruction_tol);
      x.vortex_distance = th.number("vortex_distance", x.vortex_distance);
    }
  }

  if (const toml::table* t = top.table("output")) {
    Reader r = top.sub("output", *t);
    s.out_dir = r.string("dir", s.out_dir);
  }
  top.finish();

  // Constraint errors point at the offending key.
  auto at = [&](std::string_view key) { return top.line_of_key(key); };
  try {
    validate_scenario(s);
  } catch (const Error& e) {
    const std::string msg = e.what();
    std::string key = "eps";
    for (const char* k : {"grid", "solver", "analysis", "boundary", "domain", "curve", "potential"})
      if (msg.rfind(std::string(k), 0) == 0) key = k;
    fail_at(origin, at(key), msg);
  }
  return s;
}

void validate_scenario(Scenario& s) {
  if (s.eps.empty()) throw Error(ErrorCode::kParse, "eps: list is empty");
  for (std::size_t k = 0; k < s.eps.size(); ++k) {
    if (!(s.eps[k] > 0.0)) throw Error(ErrorCode::kParse, "eps: values must be positive");
    if (k && !(s.eps[k] < s.eps[k - 1])) {
      std::ostringstream os;
      os << "eps: list must be strictly decreasing (" << s.eps[k - 1] << " then " << s.eps[k] << ")";
      throw Error(ErrorCode::kParse, os.str());
    }
  }
  if (s.grid < 64) throw Error(ErrorCode::kParse, "grid: must be at least 64");
  for (int g : s.analysis.refinement_grids)
    if (g < 64) throw Error(ErrorCode::kParse, "analysis.refinement.grids: must be at least 64");
  if (s.analysis.reference_grid != 0 && s.analysis.reference_grid < 64)
    throw Error(ErrorCode::kParse, "analysis.reference_grid: must be 0 (off) or at least 64");
  if (!s.solver.vortices.empty()) {
    int sum = 0;
    for (const auto& v : s.solver.vortices) sum += v.degree;
    if (sum != s.degree) {
      std::ostringstream os;
      os << "solver.vortices: degrees sum to " << sum << " but boundary.degree is " << s.degree;
      throw Error(ErrorCode::kParse, os.str());
    }
  }
  if (s.solver.init == InitStrategy::Kind::kRadial) {
    if (s.degree == 0) throw Error(ErrorCode::kParse, "solver.init = \"radial\" needs a nonzero degree");
    if (s.potential.kind != PotentialSpec::Kind::kGL || s.domain.kind != DomainSpec::Kind::kDisc ||
        s.domain.radius != 1.0)
      throw Error(ErrorCode::kParse, "solver.init = \"radial\" needs the gl potential on the unit disc");
  }
  // Lattice spacing must resolve the smallest eps.
  s.warnings.clear();
  double rmax = s.domain.radius;
  try {
    rmax = StarDomain::build(s.domain).max_radius();
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, std::string("domain: ") + e.what());
  }
  const double h = 2.0 * rmax / (s.grid - 1);
  if (h > 0.5 * s.eps.back()) {
    std::ostringstream os;
    os << "grid " << s.grid << " gives h = " << h << " > eps/2 = " << 0.5 * s.eps.back()
       << " at the smallest eps; vortex cores are under-resolved";
    s.warnings.push_back(os.str());
  }
}

std::string canonical_text(const Scenario& s) {
  std::ostringstream os;
  os << "name = " << quote(s.name) << "\n";
  os << "eps = [";
  for (std::size_t k = 0; k < s.eps.size(); ++k) os << (k ? ", " : "") << fmt(s.eps[k]);
  os << "]\n";
  os << "grid = " << s.grid << "\n";
  os << "seed = " << s.seed << "\n\n";

  os << "[curve]\n";
  switch (s.curve.kind) {
    case CurveSpec::Kind::kCircle: os << "kind = \"circle\"\n"; break;
    case CurveSpec::Kind::kEllipse:
      os << "kind = \"ellipse\"\na = " << fmt(s.curve.a) << "\nb = " << fmt(s.curve.b) << "\n";
      break;
    case CurveSpec::Kind::kRadial: os << "kind = \"radial\"\nr = " << quote(s.curve.radius_expr) << "\n"; break;
    case CurveSpec::Kind::kPoints: os << "kind = \"points\"\npath = " << quote(s.curve_path) << "\n"; break;
  }
  os << "samples = " << s.curve.samples << "\n\n";

  os << "[potential]\n";
  if (s.potential.kind == PotentialSpec::Kind::kGL) os << "kind = \"gl\"\n\n";
  else os << "kind = \"curve\"\nq = " << quote(s.potential.q) << "\n\n";

  os << "[domain]\n";
  if (s.domain.kind == DomainSpec::Kind::kDisc) os << "kind = \"disc\"\nr = " << fmt(s.domain.radius) << "\n\n";
  else os << "kind = \"radial\"\nrho = " << quote(s.domain.rho) << "\n\n";

  os << "[boundary]\ndegree = " << s.degree << "\neta0 = " << quote(s.eta0) << "\n\n";

  const SolverSpec& v = s.solver;
  os << "[solver]\n";
  os << "method = " << (v.method == SolverSpec::Method::kSolve ? "\"solve\"" : "\"newton_refine\"") << "\n";
  os << "init = \"" << init_name(v.init) << "\"\n";
  os << "vortices = " << vortex_list(v.vortices) << "\n";
  os << "amplitude = " << fmt(v.amplitude) << "\n";
  os << "dt = " << (v.dt > 0.0 ? fmt(v.dt) : std::string("\"auto\"")) << "\n";
  os << "scheme = " << (v.scheme == SolveConfig::Scheme::kSemiImplicit ? "\"semi-implicit\"" : "\"explicit\"") << "\n";
  os << "tol = " << fmt(v.tol) << "\n";
  os << "max_iters = " << v.max_iters << "\n";
  os << "newton = " << (v.newton ? "true" : "false") << "\n";
  os << "newton_switch = " << fmt(v.newton_switch) << "\n";
  os << "allow_fallback = " << (v.allow_fallback ? "true" : "false") << "\n";
  os << "warm_start = " << (v.warm_start ? "true" : "false") << "\n\n";

  const AnalysisSpec& a = s.analysis;
  os << "[analysis]\n";
  os << "delta2 = " << (a.delta2 > 0.0 ? fmt(a.delta2) : std::string("\"auto\"")) << "\n";
  os << "lambda = " << (a.lambda > 0.0 ? fmt(a.lambda) : std::string("\"auto\"")) << "\n";
  os << "hopf_radius = " << fmt(a.hopf_radius) << "\n";
  os << "hopf_margin = " << fmt(a.hopf_margin) << "\n";
  os << "mask_radius = " << fmt(a.mask_radius) << "\n";
  os << "lp = " << fmt(a.lp) << "\n";
  os << "reference_grid = " << a.reference_grid << "\n";
  os << "max_principle = " << (a.max_principle ? "true" : "false") << "\n";
  os << "expect_vortices = " << vortex_list(a.expect_vortices) << "\n";
  os << "checks = [";
  for (std::size_t k = 0; k < a.checks.size(); ++k) os << (k ? ", " : "") << quote(a.checks[k]);
  os << "]\n";
  if (a.refinement_eps > 0.0) {
    os << "refinement = {eps = " << fmt(a.refinement_eps) << ", grids = [" << a.refinement_grids[0] << ", "
       << a.refinement_grids[1] << "]}\n";
  }
  const Thresholds& x = a.thresholds;
  os << "\n[analysis.thresholds]\n";
  os << "slope_tol = " << fmt(x.slope_tol) << "\n";
  os << "mass_tol = " << fmt(x.mass_tol) << "\n";
  os << "remainder_frac = " << fmt(x.remainder_frac) << "\n";
  os << "boundedness_factor = " << fmt(x.boundedness_factor) << "\n";
  os << "value_order_min = " << fmt(x.value_order_min) << "\n";
  os << "value_order_max = " << fmt(x.value_order_max) << "\n";
  os << "gradient_order_min = " << fmt(x.gradient_order_min) << "\n";
  os << "gradient_order_max = " << fmt(x.gradient_order_max) << "\n";
  os << "hopf_order_min = " << fmt(x.hopf_order_min) << "\n";
  os << "reconstruction_tol = " << fmt(x.reconstruction_tol) << "\n";
  os << "vortex_distance = " << fmt(x.vortex_distance) << "\n";
  return os.str();
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string scenario_hash(const Scenario& s) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_text(s))));
  return buf;
}

}  // namespace glab
