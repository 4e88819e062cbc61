#include "glab/sweep.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>

#include <Eigen/Core>

#include "glab/analysis.hpp"
#include "glab/error.hpp"
#include "io.hpp"
#include "lattice_util.hpp"

namespace glab {

namespace {

namespace fs = std::filesystem;
using detail::json;
using detail::num;

constexpr const char* kVersion = "0.1.0";

struct Context {
  std::shared_ptr<const Potential> w;
  std::shared_ptr<const StarDomain> domain;
  std::shared_ptr<const BoundaryDatum> datum;
  ConstantsTable k;
  double delta2 = 0.0;
};

Context make_context(const Scenario& s) {
  Context c;
  if (s.potential.kind == PotentialSpec::Kind::kGL) {
    c.w = make_gl_potential();
  } else {
    auto curve = std::make_shared<const PlanarCurve>(PlanarCurve::build(s.curve));
    c.w = make_curve_potential(curve, Expression::parse(s.potential.q, "s"));
  }
  c.domain = std::make_shared<const StarDomain>(StarDomain::build(s.domain));
  c.datum = std::make_shared<const BoundaryDatum>(c.w->curve_ptr(), s.degree, Expression::parse(s.eta0, "theta"));
  c.k = compute_constants(*c.w);
  c.delta2 = s.analysis.delta2 > 0.0 ? s.analysis.delta2 : 0.5 * c.k.delta1;
  return c;
}

SolveConfig solver_config(const Scenario& s, double eps) {
  SolveConfig cfg;
  cfg.eps = eps;
  cfg.dt = s.solver.dt;
  cfg.scheme = s.solver.scheme;
  cfg.tol = s.solver.tol;
  cfg.max_iters = s.solver.max_iters;
  cfg.newton = s.solver.newton;
  cfg.newton_switch = s.solver.newton_switch;
  cfg.allow_fallback = s.solver.allow_fallback;
  return cfg;
}

Field initial_field(const Scenario& s, const Context& c, std::shared_ptr<const Grid2D> g, double eps) {
  InitStrategy st;
  st.kind = s.solver.init;
  st.vortices = s.solver.vortices;
  st.eps = eps;
  st.seed = s.seed;
  st.amplitude = s.solver.amplitude;
  return init_field(std::move(g), c.datum, st);
}

SolveResult run_solver(const Scenario& s, const Context& c, const Field& u0, double eps) {
  const SolveConfig cfg = solver_config(s, eps);
  return s.solver.method == SolverSpec::Method::kSolve ? solve(u0, *c.w, cfg) : newton_refine(u0, *c.w, cfg);
}

json error_json(const Error& e) { return {{"code", static_cast<int>(e.code())}, {"message", e.what()}}; }

struct Analysis {
  json j;
  bool have_vortices = false;
  VortexSet v;
};

Analysis analyze(const Scenario& s, const Context& c, const Field& u, double eps) {
  Analysis out;
  json& j = out.j;
  const EnergyBreakdown e = discrete_energy(u, *c.w, eps);
  j["energy"] = {{"dirichlet", e.dirichlet}, {"potential", e.potential}, {"total", e.total()}};

  try {
    out.v = bad_discs(u, eps, c.delta2, s.analysis.lambda);
    out.have_vortices = true;
    json cl = json::array();
    for (const auto& k : out.v.clusters)
      cl.push_back({{"x", k.a.x}, {"y", k.a.y}, {"degree", k.degree}, {"members", k.members.size()}, {"extent", k.extent}});
    j["vortices"] = {{"delta2", out.v.delta2},
                     {"lambda", out.v.lambda},
                     {"gradient_constant", out.v.gradient_constant},
                     {"bad_nodes", out.v.bad_nodes},
                     {"discs", out.v.discs.size()},
                     {"covered", out.v.covered},
                     {"clusters", cl},
                     {"total_degree", out.v.total_degree()},
                     {"sum_d2", out.v.sum_degree_squared()}};
  } catch (const Error& err) {
    j["vortices"] = {{"error", error_json(err)}};
  }

  std::vector<Vec2> centers;
  if (out.have_vortices)
    for (const auto& k : out.v.clusters) centers.push_back(k.a);

  if (out.have_vortices) {
    try {
      const PhaseDecomposition pd = extract_eta(u, out.v);
      json rays = json::array();
      for (std::size_t k = 0; k < pd.ray_angle.size(); ++k)
        rays.push_back({{"angle", pd.ray_angle[k]}, {"integral", pd.ray_integral[k]}, {"mean", pd.ray_integral_mean[k]}});
      j["phase"] = {{"rays", rays},
                    {"shift", pd.shift},
                    {"eta_sup", pd.eta_sup},
                    {"boundary_min", pd.boundary_min},
                    {"reconstruction_error", pd.reconstruction_error}};
    } catch (const Error& err) {
      j["phase"] = {{"error", error_json(err)}};
    }
    if (!centers.empty()) {
      try {
        const HopfMasses m = hopf_masses(u, *c.w, eps, out.v, s.analysis.hopf_radius);
        j["hopf"] = {{"radius", s.analysis.hopf_radius}, {"masses", m.masses}, {"remainder", m.remainder}, {"total", m.total}};
      } catch (const Error& err) {
        j["hopf"] = {{"error", error_json(err)}};
      }
    }
  }

  const HopfDifferential hd = hopf_differential(u, *c.w, eps, *c.domain, s.analysis.hopf_margin);
  j["hopf_identity"] = {{"residual_max", hd.residual_max}, {"nodes", hd.nodes}, {"margin", s.analysis.hopf_margin}};

  const PohozaevReport p = pohozaev(u, *c.w, eps, *c.domain);
  j["pohozaev"] = {{"potential_term", p.potential_term},
                   {"boundary_term", p.boundary_term},
                   {"lhs", p.lhs},
                   {"rhs", p.rhs},
                   {"identity_residual", p.identity_residual}};

  json b = {{"potential", e.potential}};
  if (out.have_vortices) {
    const BoundednessTerms t = t_energy_and_dist_grad(u, eps, out.v);
    b["t_energy"] = t.t_energy;
    b["dist_grad"] = t.dist_grad;
  }
  const GradientNorms gn = lp_gradient_norms(u, {s.analysis.lp}, centers, s.analysis.mask_radius);
  b["grad_lp"] = gn.lp[0];
  b["lp"] = s.analysis.lp;
  b["masked_h1"] = gn.masked_h1;
  b["masked_energy"] = gn.masked_energy;
  b["mask_radius"] = s.analysis.mask_radius;
  j["boundedness"] = b;

  if (s.analysis.max_principle && out.have_vortices && centers.empty()) {
    try {
      const MaxPrincipleReport m = check_max_principle(u, c.k, Region::full());
      j["max_principle"] = {{"passed", m.passed},
                            {"phase_bounds", m.phase_bounds},
                            {"tau_h", m.tau_h},
                            {"phi_min", m.phi_min},
                            {"phi_max", m.phi_max},
                            {"boundary_phi_min", m.boundary_phi_min},
                            {"boundary_phi_max", m.boundary_phi_max},
                            {"interior_min", m.interior_min},
                            {"boundary_min", m.boundary_min},
                            {"interior_max", m.interior_max},
                            {"boundary_max", m.boundary_max},
                            {"max_dist", m.max_dist},
                            {"message", m.message}};
    } catch (const Error& err) {
      j["max_principle"] = {{"error", error_json(err)}};
    }
  }
  return out;
}

std::vector<detail::SvgMarker> markers(const Analysis& a) {
  std::vector<detail::SvgMarker> m;
  if (a.have_vortices)
    for (const auto& k : a.v.clusters) m.push_back({k.a, k.degree});
  return m;
}

// Files for one solved eps: result JSON, checkpoint and two SVG snapshots.
json persist(const std::string& dir, const std::string& stem, const Field& u, double eps, const Analysis& a, json result,
             std::vector<std::string>& files) {
  const std::string ck = stem + ".bin", sd = stem + "-dist.svg", sp = stem + "-phase.svg", rj = stem + ".json";
  write_checkpoint((fs::path(dir) / ck).string(), u, eps);
  const detail::NodeProjection pr = detail::project_nodes(u);
  std::ostringstream title;
  title << "dist(u, Gamma), eps = " << eps;
  detail::write_svg_heatmap((fs::path(dir) / sd).string(), u.grid(), pr.dist, detail::Palette::kSequential, markers(a),
                            title.str());
  title.str("");
  title << "phase of Pi(u), eps = " << eps;
  detail::write_svg_heatmap((fs::path(dir) / sp).string(), u.grid(), pr.s, detail::Palette::kCyclic, markers(a),
                            title.str());
  result["files"] = {{"checkpoint", ck}, {"svg_dist", sd}, {"svg_phase", sp}};
  detail::write_text_atomic((fs::path(dir) / rj).string(), result.dump(2) + "\n");
  files.insert(files.end(), {rj, ck, sd, sp});
  return result;
}

json solver_json(const SolveResult& r) {
  return {{"converged", r.converged},
          {"iterations", r.iterations},
          {"flow_steps", r.flow_steps},
          {"newton_steps", r.newton_steps},
          {"linear_iterations", r.linear_iterations},
          {"final_residual", r.final_residual},
          {"dt", r.dt_used},
          {"fallback", r.fallback},
          {"message", r.message}};
}

std::string stem_for(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "eps-%02zu", k);
  return buf;
}

void say(const RunOptions& opt, const std::string& msg) {
  if (opt.progress) opt.progress(msg);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::string> effective_checks(const Scenario& s, const RunOptions& opt) {
  const auto& list = opt.override_checks ? opt.checks : s.analysis.checks;
  for (const auto& c : list)
    if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end())
      throw Error(ErrorCode::kInvalidArgument, "unknown check '" + c + "'");
  return list;
}

json versions() {
  return {{"glab", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"compiler", __VERSION__}};
}

std::string summary_line(double eps, const SolveResult& r, const Analysis& a) {
  std::ostringstream os;
  os << "eps " << eps << ": " << (r.converged ? "converged" : "not converged") << " after " << r.iterations
     << " steps (" << r.newton_steps << " Newton), residual " << r.final_residual << ", energy "
     << a.j["energy"]["total"].get<double>();
  if (a.have_vortices) {
    os << ", vortices";
    if (a.v.clusters.empty()) os << " none";
    for (const auto& k : a.v.clusters) os << " [" << k.degree << " at (" << k.a.x << ", " << k.a.y << ")]";
  } else {
    os << ", vortex detection failed";
  }
  return os.str();
}

}  // namespace

SolveOutcome run_solve(const Scenario& s, std::size_t eps_index, const RunOptions& opt) {
  if (eps_index >= s.eps.size()) throw Error(ErrorCode::kInvalidArgument, "eps index out of range");
  const double eps = s.eps[eps_index];
  const Context c = make_context(s);
  const std::string out = opt.out_dir.empty() ? s.out_dir : opt.out_dir;
  const std::string hash = scenario_hash(s);
  const std::string dir = detail::fresh_directory((fs::path(out) / hash).string(), "solve");
  detail::write_text_atomic((fs::path(dir) / "scenario.toml").string(), canonical_text(s));

  const auto g = rasterize(*c.domain, s.grid);
  say(opt, "solving eps = " + std::to_string(eps) + " on " + std::to_string(s.grid) + "^2");
  const SolveResult r = run_solver(s, c, initial_field(s, c, g, eps), eps);
  const Analysis a = analyze(s, c, r.field, eps);
  json result = a.j;
  result["eps"] = eps;
  result["n"] = g->n;
  result["h"] = g->h;
  result["status"] = "ok";
  result["solver"] = solver_json(r);
  std::vector<std::string> files;
  persist(dir, stem_for(eps_index), r.field, eps, a, result, files);

  SolveOutcome o;
  o.dir = dir;
  o.result_path = (fs::path(dir) / (stem_for(eps_index) + ".json")).string();
  o.converged = r.converged;
  o.summary = summary_line(eps, r, a);
  return o;
}

RunManifest run_sweep(const Scenario& s, const RunOptions& opt) {
  const auto t_start = std::chrono::steady_clock::now();
  const std::vector<std::string> checks = effective_checks(s, opt);
  const bool warm = s.solver.warm_start && !opt.cold_start;
  const Context c = make_context(s);
  const std::string out = opt.out_dir.empty() ? s.out_dir : opt.out_dir;
  const std::string hash = scenario_hash(s);
  const std::string dir = detail::fresh_directory((fs::path(out) / hash).string(), "run");
  detail::write_text_atomic((fs::path(dir) / "scenario.toml").string(), canonical_text(s));
  say(opt, "sweep " + s.name + " -> " + dir);

  const auto g = rasterize(*c.domain, s.grid);
  json runs = json::array();
  std::vector<json> results;
  std::vector<Field> fields;           // converged solutions, in eps order
  std::vector<double> field_eps;
  std::vector<Analysis> field_analysis;
  std::optional<Field> previous;
  for (std::size_t k = 0; k < s.eps.size(); ++k) {
    const double eps = s.eps[k];
    const auto t0 = std::chrono::steady_clock::now();
    json run = {{"eps", eps}, {"result", stem_for(k) + ".json"}};
    json result = {{"eps", eps}, {"n", g->n}, {"h", g->h}};
    std::vector<std::string> files;
    try {
      const Field u0 = (warm && previous) ? *previous : initial_field(s, c, g, eps);
      const SolveResult r = run_solver(s, c, u0, eps);
      const Analysis a = analyze(s, c, r.field, eps);
      result.update(a.j);
      result["status"] = "ok";
      result["solver"] = solver_json(r);
      result["warm_start"] = warm && previous.has_value();
      result = persist(dir, stem_for(k), r.field, eps, a, result, files);
      say(opt, summary_line(eps, r, a));
      if (r.converged) {
        fields.push_back(r.field);
        field_eps.push_back(eps);
        field_analysis.push_back(a);
        previous = r.field;
      } else {
        previous.reset();
      }
      run["status"] = "ok";
    } catch (const Error& err) {
      result["status"] = "failed";
      result["error"] = error_json(err);
      detail::write_text_atomic((fs::path(dir) / (stem_for(k) + ".json")).string(), result.dump(2) + "\n");
      files.push_back(stem_for(k) + ".json");
      run["status"] = "failed";
      run["error"] = error_json(err);
      previous.reset();
      say(opt, "eps " + std::to_string(eps) + ": failed: " + err.what());
    }
    run["files"] = files;
    run["seconds"] = seconds_since(t0);
    runs.push_back(run);
    results.push_back(result);
  }

  json agg = json::object();
  {
    std::vector<double> e, en;
    for (const auto& r : results)
      if (r.value("status", "") == "ok" && r["solver"]["converged"].get<bool>()) {
        e.push_back(r["eps"].get<double>());
        en.push_back(r["energy"]["total"].get<double>());
      }
    try {
      const ScalingFit f = energy_scaling(e, en);
      agg["energy_scaling"] = {{"slope", f.slope}, {"intercept", f.intercept}, {"fit_residual", f.residual},
                               {"points", e.size()}};
    } catch (const Error& err) {
      agg["energy_scaling"] = {{"error", error_json(err)}};
    }
  }
  // Expected slope pi sum D_j^2 from the smallest converged eps.
  if (!field_analysis.empty() && field_analysis.back().have_vortices) {
    const double d2 = field_analysis.back().v.sum_degree_squared();
    agg["sum_d2"] = d2;
    agg["expected_slope"] = kPi * d2;
  }

  if (s.degree == 0 && s.analysis.reference_grid > 0 && fields.size() >= 2) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Field ref = canonical_map(rasterize(*c.domain, s.analysis.reference_grid), c.datum, {});
      std::vector<const Field*> ptrs;
      for (const Field& f : fields) ptrs.push_back(&f);
      const RateReport rr = convergence_rates(ptrs, field_eps, ref);
      agg["rates"] = {{"eps", rr.eps},
                      {"reference_grid", s.analysis.reference_grid},
                      {"value_error", rr.value_error},
                      {"gradient_error", rr.gradient_error},
                      {"t_amplitude", rr.t_amplitude},
                      {"value_order", rr.value_order},
                      {"gradient_order", rr.gradient_order},
                      {"t_ratio", rr.t_ratio},
                      {"floor", rr.floor},
                      {"below_floor", rr.below_floor}};
    } catch (const Error& err) {
      agg["rates"] = {{"error", error_json(err)}};
    }
    say(opt, "convergence rates against a " + std::to_string(s.analysis.reference_grid) + "^2 reference (" +
                 std::to_string(seconds_since(t0)) + " s)");
  }

  if (!field_analysis.empty() && field_analysis.back().have_vortices && !field_analysis.back().v.clusters.empty()) {
    try {
      std::vector<CanonicalVortex> cv;
      std::vector<Vec2> centers;
      for (const auto& k : field_analysis.back().v.clusters) {
        cv.push_back({k.a, k.degree});
        centers.push_back(k.a);
      }
      const Field star = canonical_map(g, c.datum, cv);
      std::vector<double> d;
      for (const Field& f : fields) d.push_back(masked_l2_distance(f, star, centers, s.analysis.mask_radius));
      json cj = json::array();
      for (const auto& v : cv) cj.push_back({{"x", v.a.x}, {"y", v.a.y}, {"degree", v.degree}});
      agg["limit_l2"] = {{"eps", field_eps}, {"distance", d}, {"centers", cj}, {"mask_radius", s.analysis.mask_radius}};
    } catch (const Error& err) {
      agg["limit_l2"] = {{"error", error_json(err)}};
    }
  }

  if (s.analysis.refinement_eps > 0.0) {
    json levels = json::array();
    try {
      for (int n : s.analysis.refinement_grids) {
        const auto gr = rasterize(*c.domain, n);
        const SolveResult r = run_solver(s, c, initial_field(s, c, gr, s.analysis.refinement_eps), s.analysis.refinement_eps);
        const HopfDifferential hd = hopf_differential(r.field, *c.w, s.analysis.refinement_eps, *c.domain,
                                                      s.analysis.hopf_margin);
        levels.push_back({{"n", n}, {"h", gr->h}, {"converged", r.converged}, {"residual_max", hd.residual_max},
                          {"nodes", hd.nodes}});
        say(opt, "refinement n = " + std::to_string(n) + ": Hopf residual " + std::to_string(hd.residual_max));
      }
      const double r0 = levels[0]["residual_max"], r1 = levels[1]["residual_max"];
      const double h0 = levels[0]["h"], h1 = levels[1]["h"];
      agg["refinement"] = {{"eps", s.analysis.refinement_eps}, {"levels", levels},
                           {"order", num(std::log(r0 / r1) / std::log(h0 / h1))}};
    } catch (const Error& err) {
      agg["refinement"] = {{"eps", s.analysis.refinement_eps}, {"levels", levels}, {"error", error_json(err)}};
    }
  }

  // CSV series, one row per eps.
  {
    std::size_t kmax = 0;
    for (const auto& r : results)
      if (r.contains("hopf") && r["hopf"].contains("masses")) kmax = std::max(kmax, r["hopf"]["masses"].size());
    std::ostringstream csv;
    csv << "eps,energy_dirichlet,energy_potential,n_vortices,sum_d2";
    for (std::size_t k = 0; k < kmax; ++k) csv << ",m_" << k + 1;
    csv << ",slope,intercept\n";
    csv.precision(17);
    const json& es = agg["energy_scaling"];
    for (const auto& r : results) {
      csv << r["eps"].get<double>() << ",";
      if (r.value("status", "") == "ok") {
        csv << r["energy"]["dirichlet"].get<double>() << "," << r["energy"]["potential"].get<double>() << ",";
        if (r["vortices"].contains("clusters"))
          csv << r["vortices"]["clusters"].size() << "," << r["vortices"]["sum_d2"].get<double>();
        else
          csv << ",";
      } else {
        csv << ",,,";
      }
      for (std::size_t k = 0; k < kmax; ++k) {
        csv << ",";
        if (r.contains("hopf") && r["hopf"].contains("masses") && k < r["hopf"]["masses"].size())
          csv << r["hopf"]["masses"][k].get<double>();
      }
      csv << ",";
      if (es.contains("slope")) csv << es["slope"].get<double>() << "," << es["intercept"].get<double>();
      else csv << ",";
      csv << "\n";
    }
    detail::write_text_atomic((fs::path(dir) / "series.csv").string(), csv.str());
  }

  json manifest = {{"format", "glab-manifest-1"},
                   {"name", s.name},
                   {"scenario_hash", hash},
                   {"scenario_file", "scenario.toml"},
                   {"series_file", "series.csv"},
                   {"versions", versions()},
                   {"degree", s.degree},
                   {"warm_start", warm},
                   {"checks_enabled", checks},
                   {"thresholds",
                    {{"slope_tol", s.analysis.thresholds.slope_tol},
                     {"mass_tol", s.analysis.thresholds.mass_tol},
                     {"remainder_frac", s.analysis.thresholds.remainder_frac},
                     {"boundedness_factor", s.analysis.thresholds.boundedness_factor},
                     {"value_order", {s.analysis.thresholds.value_order_min, s.analysis.thresholds.value_order_max}},
                     {"gradient_order",
                      {s.analysis.thresholds.gradient_order_min, s.analysis.thresholds.gradient_order_max}},
                     {"hopf_order_min", s.analysis.thresholds.hopf_order_min},
                     {"reconstruction_tol", s.analysis.thresholds.reconstruction_tol},
                     {"vortex_distance", s.analysis.thresholds.vortex_distance}}},
                   {"expect_vortices", json::array()},
                   {"warnings", s.warnings},
                   {"runs", runs},
                   {"aggregate", agg}};
  for (const auto& v : s.analysis.expect_vortices)
    manifest["expect_vortices"].push_back({{"x", v.x.x}, {"y", v.x.y}, {"degree", v.degree}});

  const std::vector<CheckResult> cr = detail::evaluate_checks(manifest, results);
  json cj = json::array();
  bool all = true;
  for (const auto& r : cr) {
    cj.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    all = all && r.passed;
  }
  manifest["checks"] = cj;
  manifest["passed"] = all;
  manifest["seconds_total"] = seconds_since(t_start);
  const std::string mpath = (fs::path(dir) / "manifest.json").string();
  detail::write_text_atomic(mpath, manifest.dump(2) + "\n");

  RunManifest m;
  m.path = mpath;
  m.dir = dir;
  m.hash = hash;
  m.passed = all;
  m.checks = cr;
  return m;
}

std::string validation_text(const Scenario& s, bool& ok) {
  std::ostringstream os;
  os << "# scenario " << s.name << " (hash " << scenario_hash(s) << "), defaults filled in\n";
  os << canonical_text(s) << "\n";
  for (const auto& w : s.warnings) os << "warning: " << w << "\n";
  const Context c = make_context(s);
  const ValidationReport v = validate_assumptions(*c.w);
  ok = v.passed;
  os << "# potential hypotheses (" << c.w->kind() << "): " << (v.passed ? "all hold" : "FAILED: " + v.failures) << "\n";
  os << "#   nonnegative " << v.nonnegative << ", zero set " << v.zero_set << ", nondegenerate mu = " << v.mu
     << ", coercive beyond " << v.coercivity_radius << ", Dieudonne M = " << v.dieudonne_M << "\n";
  os << "# tube constants: delta0 = " << c.k.delta0 << ", delta1 = " << c.k.delta1 << ", m = " << c.k.m
     << ", k = " << c.k.k << "\n";
  os << "#   c0..c5 =";
  for (double x : c.k.c) os << " " << x;
  os << "\n#   tube-width condition " << tube_width_condition(c.k) << " (< 1 required)\n";
  os << "# delta2 = " << c.delta2 << (s.analysis.delta2 > 0.0 ? "" : " (auto: 0.5 delta1)") << "\n";
  const auto g = rasterize(*c.domain, s.grid);
  os << "# grid " << s.grid << "^2, h = " << g->h << ", unknowns " << g->unknowns() << "\n";
  for (double eps : s.eps) {
    const double dt = s.solver.dt > 0.0 ? s.solver.dt : 0.25 * eps * eps;
    os << "#   eps " << eps << ": dt = " << dt << (s.solver.dt > 0.0 ? "" : " (auto: eps^2/4)") << ", h/eps = "
       << g->h / eps << "\n";
  }
  return os.str();
}

}  // namespace glab
