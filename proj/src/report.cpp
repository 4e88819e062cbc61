#include <cmath>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "glab/error.hpp"
#include "glab/sweep.hpp"
#include "io.hpp"

namespace glab {

namespace detail {

namespace {

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

bool ok_run(const json& r) { return r.value("status", "") == "ok"; }
bool converged(const json& r) { return ok_run(r) && r["solver"].value("converged", false); }

double get(const json& j, const char* key) {
  return j.contains(key) && j[key].is_number() ? j[key].get<double>() : std::nan("");
}

CheckResult check_converged(const std::vector<json>& results) {
  CheckResult c{"converged", true, ""};
  int bad = 0;
  std::ostringstream os;
  for (const auto& r : results) {
    if (converged(r)) continue;
    ++bad;
    os << " eps " << r["eps"].get<double>() << (ok_run(r) ? " not converged" : " failed") << ";";
  }
  c.passed = bad == 0 && !results.empty();
  c.detail = bad ? std::to_string(bad) + " of " + std::to_string(results.size()) + " runs:" + os.str()
                 : "all " + std::to_string(results.size()) + " runs converged";
  return c;
}

CheckResult check_degree(const json& m, const std::vector<json>& results) {
  CheckResult c{"degree", true, ""};
  const int d = m.value("degree", 0);
  std::ostringstream os;
  for (const auto& r : results) {
    if (!converged(r)) continue;
    const json& v = r["vortices"];
    if (!v.contains("total_degree")) {
      c.passed = false;
      os << "eps " << r["eps"].get<double>() << ": " << v["error"]["message"].get<std::string>() << "; ";
    } else if (v["total_degree"].get<int>() != d) {
      c.passed = false;
      os << "eps " << r["eps"].get<double>() << ": sum of degrees " << v["total_degree"].get<int>() << "; ";
    }
  }
  c.detail = c.passed ? "detected degrees sum to " + std::to_string(d) + " in every converged run"
                      : os.str() + "boundary degree " + std::to_string(d);
  return c;
}

CheckResult check_slope(const json& m) {
  CheckResult c{"slope", false, ""};
  const json& a = m["aggregate"];
  const json& es = a["energy_scaling"];
  if (!es.contains("slope")) {
    c.detail = "no fit: " + es["error"].value("message", std::string("missing"));
    return c;
  }
  const double slope = es["slope"], expected = get(a, "expected_slope"), tol = m["thresholds"]["slope_tol"];
  if (!(expected > 0.0)) {
    c.detail = "slope " + fmt(slope) + " but no vortices to predict it";
    return c;
  }
  const double rel = slope / expected - 1.0;
  c.passed = std::abs(rel) <= tol;
  c.detail = "slope " + fmt(slope) + " vs pi sum D^2 = " + fmt(expected) + " (" + fmt(100 * rel, 3) + "%, tolerance " +
             fmt(100 * tol, 3) + "%)";
  return c;
}

CheckResult check_vortices(const json& m, const std::vector<json>& results) {
  CheckResult c{"vortices", true, ""};
  const json& expect = m["expect_vortices"];
  const double tol = m["thresholds"]["vortex_distance"];
  std::ostringstream os;
  int runs = 0;
  for (const auto& r : results) {
    if (!converged(r)) continue;
    ++runs;
    const json& v = r["vortices"];
    if (!v.contains("clusters")) {
      c.passed = false;
      os << "eps " << r["eps"].get<double>() << ": no vortex set; ";
      continue;
    }
    const json& cl = v["clusters"];
    const double h = r["h"];
    bool ok = cl.size() == expect.size();
    double worst = 0.0;
    for (const auto& e : expect) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& k : cl)
        if (k["degree"] == e["degree"])
          best = std::min(best, std::hypot(k["x"].get<double>() - e["x"].get<double>(),
                                           k["y"].get<double>() - e["y"].get<double>()));
      worst = std::max(worst, best / h);
      ok = ok && best <= tol * h;
    }
    if (!ok) {
      c.passed = false;
      os << "eps " << r["eps"].get<double>() << ": " << cl.size() << " clusters, worst offset " << fmt(worst, 3)
         << " h; ";
    }
  }
  c.passed = c.passed && runs > 0;
  c.detail = c.passed ? "expected vortices found within " + fmt(tol, 3) + " h in " + std::to_string(runs) + " runs"
                      : os.str();
  return c;
}

CheckResult check_hopf_mass(const json& m, const std::vector<json>& results) {
  CheckResult c{"hopf_mass", false, ""};
  const json* last = nullptr;
  for (const auto& r : results)
    if (converged(r)) last = &r;
  if (!last || !last->contains("hopf") || !(*last)["hopf"].contains("masses")) {
    c.detail = "no Hopf masses at the smallest eps";
    if (last && last->contains("hopf") && (*last)["hopf"].contains("error"))
      c.detail += ": " + (*last)["hopf"]["error"]["message"].get<std::string>();
    return c;
  }
  const json& h = (*last)["hopf"];
  const json& cl = (*last)["vortices"]["clusters"];
  const double tol = m["thresholds"]["mass_tol"], frac = m["thresholds"]["remainder_frac"];
  bool ok = true;
  double mmin = std::numeric_limits<double>::infinity();
  std::ostringstream os;
  os << "eps " << (*last)["eps"].get<double>() << ", r = " << h["radius"].get<double>() << ":";
  for (std::size_t k = 0; k < h["masses"].size(); ++k) {
    const double mk = h["masses"][k], dk = cl[k]["degree"].get<int>();
    const double want = kPi * dk * dk / 2.0;
    ok = ok && mk > 0.0 && std::abs(mk / want - 1.0) <= tol;
    mmin = std::min(mmin, mk);
    os << " m_" << k + 1 << " = " << fmt(mk) << " (" << fmt(mk / want, 3) << " x pi D^2/2)";
  }
  const double rem = h["remainder"];
  ok = ok && rem < frac * mmin;
  os << ", remainder " << fmt(rem) << " (" << fmt(100 * rem / mmin, 3) << "% of min m_j)";
  c.passed = ok;
  c.detail = os.str();
  return c;
}

CheckResult check_boundedness(const json& m, const std::vector<json>& results) {
  CheckResult c{"boundedness", true, ""};
  const double factor = m["thresholds"]["boundedness_factor"];
  std::ostringstream os;
  int runs = 0;
  for (const auto& r : results) runs += converged(r);
  if (runs < 2) {
    c.passed = false;
    c.detail = "fewer than two converged runs";
    return c;
  }
  for (const char* key : {"potential", "t_energy", "dist_grad", "grad_lp", "masked_h1"}) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    bool have = true;
    for (const auto& r : results) {
      if (!converged(r)) continue;
      const double v = get(r["boundedness"], key);
      if (!std::isfinite(v)) {
        have = false;
        continue;
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const bool ok = have && lo > 0.0 && hi / lo < factor;
    c.passed = c.passed && ok;
    os << key << " " << (have ? fmt(hi / lo, 3) : std::string("missing")) << (ok ? "" : " (FAIL)") << "; ";
  }
  c.detail = "max/min ratios: " + os.str() + "limit " + fmt(factor, 3);
  return c;
}

CheckResult check_rates(const json& m) {
  CheckResult c{"rates", false, ""};
  const json& a = m["aggregate"];
  if (!a.contains("rates") || !a["rates"].contains("value_order")) {
    c.detail = a.contains("rates") ? a["rates"]["error"]["message"].get<std::string>() : "no rate data (needs d = 0)";
    return c;
  }
  const json& r = a["rates"];
  const json& t = m["thresholds"];
  bool ok = !r["value_order"].empty();
  std::ostringstream os;
  os << "value orders";
  for (const auto& o : r["value_order"]) {
    const double v = o.is_number() ? o.get<double>() : std::nan("");
    ok = ok && v >= t["value_order"][0].get<double>() && v <= t["value_order"][1].get<double>();
    os << " " << fmt(v, 3);
  }
  os << ", gradient orders";
  for (const auto& o : r["gradient_order"]) {
    const double v = o.is_number() ? o.get<double>() : std::nan("");
    ok = ok && v >= t["gradient_order"][0].get<double>() && v <= t["gradient_order"][1].get<double>();
    os << " " << fmt(v, 3);
  }
  if (r.value("below_floor", false)) os << " (errors below the reference floor " << fmt(r["floor"].get<double>()) << ")";
  c.passed = ok;
  c.detail = os.str();
  return c;
}

CheckResult check_max_principle(const std::vector<json>& results) {
  CheckResult c{"max_principle", true, ""};
  std::ostringstream os;
  int runs = 0;
  for (const auto& r : results) {
    if (!converged(r)) continue;
    ++runs;
    const double eps = r["eps"];
    if (!r.contains("max_principle")) {
      c.passed = false;
      os << "eps " << eps << ": not evaluated (vortices present); ";
      continue;
    }
    const json& mp = r["max_principle"];
    if (mp.contains("error")) {
      c.passed = false;
      os << "eps " << eps << ": " << mp["error"]["message"].get<std::string>() << "; ";
      continue;
    }
    const bool ok = mp["passed"].get<bool>() && mp["phase_bounds"].get<bool>();
    c.passed = c.passed && ok;
    os << "eps " << eps << ": " << (ok ? "pass" : "FAIL") << " (tau_h " << fmt(mp["tau_h"].get<double>(), 3) << "); ";
  }
  c.passed = c.passed && runs > 0;
  c.detail = os.str();
  return c;
}

CheckResult check_limit(const json& m) {
  CheckResult c{"limit_l2", false, ""};
  const json& a = m["aggregate"];
  if (!a.contains("limit_l2") || !a["limit_l2"].contains("distance")) {
    c.detail = a.contains("limit_l2") ? a["limit_l2"]["error"]["message"].get<std::string>() : "no limit data";
    return c;
  }
  const json& d = a["limit_l2"]["distance"];
  bool ok = d.size() >= 2;
  std::ostringstream os;
  os << "||u_eps - u*|| off B_r(a):";
  for (std::size_t k = 0; k < d.size(); ++k) {
    os << " " << fmt(d[k].get<double>());
    if (k && !(d[k].get<double>() < d[k - 1].get<double>())) ok = false;
  }
  c.passed = ok;
  c.detail = os.str() + (ok ? " (decreasing)" : " (not monotone)");
  return c;
}

CheckResult check_hopf_identity(const json& m) {
  CheckResult c{"hopf_identity", false, ""};
  const json& a = m["aggregate"];
  if (!a.contains("refinement")) {
    c.detail = "no refinement pair configured";
    return c;
  }
  const json& r = a["refinement"];
  if (r.contains("error") || !r["order"].is_number()) {
    c.detail = r.contains("error") ? r["error"]["message"].get<std::string>() : "order undefined";
    return c;
  }
  const double order = r["order"], need = m["thresholds"]["hopf_order_min"];
  bool conv = true;
  std::ostringstream os;
  for (const auto& l : r["levels"]) {
    conv = conv && l["converged"].get<bool>();
    os << "n " << l["n"].get<int>() << ": " << fmt(l["residual_max"].get<double>()) << "; ";
  }
  c.passed = conv && order >= need;
  c.detail = os.str() + "order " + fmt(order, 3) + " (need >= " + fmt(need, 3) + ")";
  return c;
}

CheckResult check_reconstruction(const json& m, const std::vector<json>& results) {
  CheckResult c{"reconstruction", true, ""};
  const double tol = m["thresholds"]["reconstruction_tol"];
  double worst = 0.0;
  int runs = 0;
  std::ostringstream os;
  for (const auto& r : results) {
    if (!converged(r)) continue;
    ++runs;
    if (!r.contains("phase") || r["phase"].contains("error")) {
      c.passed = false;
      os << "eps " << r["eps"].get<double>() << ": "
         << (r.contains("phase") ? r["phase"]["error"]["message"].get<std::string>() : std::string("no phase")) << "; ";
      continue;
    }
    const double e = r["phase"]["reconstruction_error"];
    worst = std::max(worst, e);
    if (!(e <= tol)) c.passed = false;
    for (const auto& ray : r["phase"]["rays"])
      if (!(ray["integral"].get<double>() <= ray["mean"].get<double>())) {
        c.passed = false;
        os << "eps " << r["eps"].get<double>() << ": ray integral above the mean; ";
      }
  }
  c.passed = c.passed && runs > 0;
  c.detail = os.str() + "max reconstruction error " + fmt(worst, 3) + " (tolerance " + fmt(tol, 3) + ")";
  return c;
}

}  // namespace

std::vector<CheckResult> evaluate_checks(const json& manifest, const std::vector<json>& results) {
  std::vector<CheckResult> out;
  for (const auto& jn : manifest["checks_enabled"]) {
    const std::string n = jn.get<std::string>();
    if (n == "converged") out.push_back(check_converged(results));
    else if (n == "degree") out.push_back(check_degree(manifest, results));
    else if (n == "slope") out.push_back(check_slope(manifest));
    else if (n == "vortices") out.push_back(check_vortices(manifest, results));
    else if (n == "hopf_mass") out.push_back(check_hopf_mass(manifest, results));
    else if (n == "boundedness") out.push_back(check_boundedness(manifest, results));
    else if (n == "rates") out.push_back(check_rates(manifest));
    else if (n == "max_principle") out.push_back(check_max_principle(results));
    else if (n == "limit_l2") out.push_back(check_limit(manifest));
    else if (n == "hopf_identity") out.push_back(check_hopf_identity(manifest));
    else if (n == "reconstruction") out.push_back(check_reconstruction(manifest, results));
    else out.push_back({n, false, "unknown check"});
  }
  return out;
}

}  // namespace detail

ReportOutcome report(const std::string& manifest_path) {
  namespace fs = std::filesystem;
  using detail::json;
  const json m = json::parse(detail::read_text(manifest_path), nullptr, false);
  if (m.is_discarded() || !m.contains("runs")) throw Error(ErrorCode::kParse, manifest_path + " is not a glab manifest");
  const fs::path dir = fs::path(manifest_path).parent_path();

  const std::string scen = detail::read_text((dir / m["scenario_file"].get<std::string>()).string());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(scen)));
  if (m["scenario_hash"].get<std::string>() != buf)
    throw Error(ErrorCode::kInvalidArgument, "scenario hash mismatch: manifest " + m["scenario_hash"].get<std::string>() +
                                                 ", scenario file " + buf);
  (void)detail::read_text((dir / m["series_file"].get<std::string>()).string());

  std::vector<json> results;
  for (const auto& run : m["runs"]) {
    for (const auto& f : run["files"])
      if (!fs::exists(dir / f.get<std::string>()))
        throw Error(ErrorCode::kMissingFile, "missing result file " + (dir / f.get<std::string>()).string());
    const json r = json::parse(detail::read_text((dir / run["result"].get<std::string>()).string()), nullptr, false);
    if (r.is_discarded()) throw Error(ErrorCode::kParse, "unreadable result " + run["result"].get<std::string>());
    results.push_back(r);
  }

  ReportOutcome out;
  out.checks = detail::evaluate_checks(m, results);
  std::ostringstream os;
  os << "scenario " << m.value("name", std::string("?")) << " (hash " << m["scenario_hash"].get<std::string>() << ")\n";
  for (const auto& w : m.value("warnings", json::array())) os << "warning: " << w.get<std::string>() << "\n";
  os << std::left << std::setw(9) << "eps" << std::setw(11) << "status" << std::setw(13) << "residual"
     << std::setw(12) << "energy" << std::setw(12) << "W/eps^2" << std::setw(9) << "vortex" << std::setw(7)
     << "sumD2" << "masses\n";
  for (const auto& r : results) {
    os << std::setw(9) << detail::fmt(r["eps"].get<double>());
    if (!detail::ok_run(r)) {
      os << "failed: " << r["error"]["message"].get<std::string>() << "\n";
      continue;
    }
    os << std::setw(11) << (detail::converged(r) ? "converged" : "stalled") << std::setw(13)
       << detail::fmt(r["solver"]["final_residual"].get<double>(), 3) << std::setw(12)
       << detail::fmt(r["energy"]["total"].get<double>(), 6) << std::setw(12)
       << detail::fmt(r["energy"]["potential"].get<double>(), 5);
    const json& v = r["vortices"];
    if (v.contains("clusters")) {
      os << std::setw(9) << v["clusters"].size() << std::setw(7) << v["sum_d2"].get<double>();
    } else {
      os << std::setw(16) << "error";
    }
    if (r.contains("hopf") && r["hopf"].contains("masses"))
      for (const auto& x : r["hopf"]["masses"]) os << detail::fmt(x.get<double>()) << " ";
    os << "\n";
  }
  const json& agg = m["aggregate"];
  if (agg.contains("energy_scaling") && agg["energy_scaling"].contains("slope"))
    os << "energy slope " << detail::fmt(agg["energy_scaling"]["slope"].get<double>()) << ", intercept "
       << detail::fmt(agg["energy_scaling"]["intercept"].get<double>()) << "\n";
  bool all = true;
  for (const auto& c : out.checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    all = all && c.passed;
  }
  os << (all ? "all checks passed" : "some checks failed") << "\n";
  out.text = os.str();
  out.exit_code = all ? 0 : 1;
  return out;
}

}  // namespace glab
