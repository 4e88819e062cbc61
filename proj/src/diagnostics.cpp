#include <algorithm>
#include <cmath>
#include <sstream>

#include "glab/analysis.hpp"
#include "glab/error.hpp"
#include "glab/linalg.hpp"
#include "lattice_util.hpp"

namespace glab {

using detail::kNaN;

Field canonical_map(std::shared_ptr<const Grid2D> grid, std::shared_ptr<const BoundaryDatum> datum,
                    const std::vector<CanonicalVortex>& vortices) {
  int sum = 0;
  for (const auto& v : vortices) sum += v.degree;
  if (sum != datum->degree()) {
    std::ostringstream os;
    os << "vortex degrees sum to " << sum << " but the boundary degree is " << datum->degree();
    throw Error(ErrorCode::kDegreeMismatch, os.str());
  }
  // Boundary data phi0 - sum D_j theta_j, written so that it is continuous in
  // theta: each vortex angle is taken relative to the polar angle.
  std::vector<double> data(grid->anchors.size());
  for (std::size_t a = 0; a < grid->anchors.size(); ++a) {
    const auto& an = grid->anchors[a];
    double val = datum->phase(an.theta);
    for (const auto& v : vortices) {
      const Vec2 d = an.x - v.a;
      val -= v.degree * (an.theta + wrap_angle(std::atan2(d.y, d.x) - an.theta));
    }
    data[a] = val;
  }
  const std::vector<double> eta = harmonic_extension(*grid, data);
  Field u(grid, datum);
  const PlanarCurve& c = datum->curve();
  for (int k = 0; k < grid->unknowns(); ++k) {
    const Vec2 x = grid->position(grid->node_of[k]);
    double ph = eta[k];
    for (const auto& v : vortices) ph += v.degree * std::atan2(x.y - v.a.y, x.x - v.a.x);
    u.values()[k] = c.tau(ph);
  }
  return u;
}

namespace {

Vec2 bilinear(const Field& u, Vec2 x, bool unknown_corners) {
  const Grid2D& g = u.grid();
  const double fx = (x.x + g.R) / g.h, fy = (x.y + g.R) / g.h;
  const int i = static_cast<int>(std::floor(fx)), j = static_cast<int>(std::floor(fy));
  if (i < 0 || j < 0 || i + 1 >= g.n || j + 1 >= g.n) return {kNaN, kNaN};
  const int c[4] = {g.node(i, j), g.node(i + 1, j), g.node(i, j + 1), g.node(i + 1, j + 1)};
  for (int k : c) {
    if (!u.defined(k)) return {kNaN, kNaN};
    if (unknown_corners && g.unknown_of[k] < 0) return {kNaN, kNaN};
  }
  const double a = fx - i, b = fy - j;
  return (1 - a) * (1 - b) * u.at_node(c[0]) + a * (1 - b) * u.at_node(c[1]) + (1 - a) * b * u.at_node(c[2]) +
         a * b * u.at_node(c[3]);
}

bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

// Some non-unknown lattice node lies within `margin` of this node.
bool near_boundary(const Grid2D& g, int node, double margin) {
  const int reach = static_cast<int>(std::ceil(margin / g.h));
  const int i = node % g.n, j = node / g.n;
  for (int b = j - reach; b <= j + reach; ++b)
    for (int a = i - reach; a <= i + reach; ++a) {
      if (std::hypot(a - i, b - j) * g.h > margin) continue;
      if (a < 0 || b < 0 || a >= g.n || b >= g.n || g.unknown_of[g.node(a, b)] < 0) return true;
    }
  return false;
}

// Distance from a point to the sampled boundary of a star domain.
class BoundaryDistance {
 public:
  explicit BoundaryDistance(const StarDomain& dom, int samples = 2048) : dom_(dom) {
    pts_.reserve(samples);
    for (int k = 0; k < samples; ++k) pts_.push_back(dom.boundary_point(-kPi + kTwoPi * k / samples));
  }
  // Exact up to sampling when below `cap`; otherwise some value >= cap.
  double operator()(Vec2 x, double cap) const {
    const double radial = dom_.rho(std::atan2(x.y, x.x)) - norm(x);
    if (radial < cap) return radial;  // an upper bound below cap already decides
    double best = radial;
    for (const Vec2& p : pts_) best = std::min(best, norm(p - x));
    return best;
  }

 private:
  const StarDomain& dom_;
  std::vector<Vec2> pts_;
};

}  // namespace

Vec2 sample_bilinear(const Field& u, Vec2 x) { return bilinear(u, x, false); }

// ---------------------------------------------------------------------------

PohozaevReport pohozaev(const Field& u, const Potential& w, double eps, const StarDomain& dom) {
  const Grid2D& g = u.grid();
  PohozaevReport rep;
  ProjectionHint hint;
  for (int k = 0; k < g.unknowns(); ++k) rep.potential_term += g.area[k] * g.h * g.h * w.value(u.values()[k], &hint);
  rep.potential_term /= eps * eps;

  const BoundaryDatum& datum = u.datum();
  const int samples = std::max(1024, 4 * g.n);
  const double dth = kTwoPi / samples;
  double lhs_b = 0.0, rhs = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double th = -kPi + (k + 0.5) * dth;
    const Vec2 x = dom.boundary_point(th);
    const Vec2 nrm = dom.outward_normal(th);
    const Vec2 sig{-nrm.y, nrm.x};
    const double dl = dom.speed(th) * dth;
    const Vec2 g0 = datum.value(th);
    Vec2 dn{kNaN, kNaN};
    for (int m = 2; m <= 4 && !finite(dn); ++m) {
      const double step = m * g.h;
      const Vec2 u1 = bilinear(u, x - step * nrm, false);
      const Vec2 u2 = bilinear(u, x - 2.0 * step * nrm, false);
      if (finite(u1) && finite(u2)) dn = -1.0 * (-3.0 * g0 + 4.0 * u1 - u2) / (2.0 * step);
    }
    if (!finite(dn)) throw Error(ErrorCode::kInternal, "boundary normal derivative could not be sampled");
    const double dd = 1e-5;
    const Vec2 ds = (datum.value(th + dd) - datum.value(th - dd)) / (2.0 * dd * dom.speed(th));
    const double xn = dot(x, nrm), xs = dot(x, sig);
    rep.boundary_term += norm2(dn) * dl;
    lhs_b += 0.5 * xn * norm2(dn) * dl;
    rhs += (0.5 * xn * norm2(ds) - xs * dot(dn, ds)) * dl;
  }
  rep.lhs = 2.0 * rep.potential_term + lhs_b;
  rep.rhs = rhs;
  rep.identity_residual = std::abs(rep.lhs - rep.rhs) / std::max(1.0, std::abs(rep.lhs));
  return rep;
}

ScalingFit energy_scaling(const std::vector<double>& eps, const std::vector<double>& energy) {
  if (eps.size() != energy.size()) throw Error(ErrorCode::kInvalidArgument, "eps and energy lengths differ");
  if (eps.size() < 3) throw Error(ErrorCode::kInsufficientData, "energy scaling needs at least 3 eps values");
  const double n = static_cast<double>(eps.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!(eps[k] > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps must be positive");
    const double x = std::abs(std::log(eps[k]));
    sx += x;
    sy += energy[k];
    sxx += x * x;
    sxy += x * energy[k];
  }
  const double den = n * sxx - sx * sx;
  if (std::abs(den) <= 1e-12 * n * sxx) throw Error(ErrorCode::kInsufficientData, "eps values must be distinct");
  ScalingFit f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double rr = 0.0;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    const double e = energy[k] - (f.slope * std::abs(std::log(eps[k])) + f.intercept);
    rr += e * e;
  }
  f.residual = std::sqrt(rr / n);
  return f;
}

HopfMasses hopf_masses(const Field& u, const Potential& w, double eps, const std::vector<Vec2>& centers, double r) {
  for (std::size_t a = 0; a < centers.size(); ++a)
    for (std::size_t b = a + 1; b < centers.size(); ++b)
      if (norm(centers[a] - centers[b]) <= 2.0 * r)
        throw Error(ErrorCode::kRegionInvalid, "mass discs overlap");
  const Grid2D& g = u.grid();
  HopfMasses out;
  out.masses.assign(centers.size(), 0.0);
  ProjectionHint hint;
  for (int k = 0; k < g.unknowns(); ++k) {
    const double m = g.area[k] * g.h * g.h * w.value(u.values()[k], &hint) / (eps * eps);
    const Vec2 x = g.position(g.node_of[k]);
    out.total += m;
    bool inside = false;
    for (std::size_t j = 0; j < centers.size(); ++j)
      if (norm(x - centers[j]) < r) {
        out.masses[j] += m;
        inside = true;
        break;
      }
    if (!inside) out.remainder += m;
  }
  return out;
}

HopfMasses hopf_masses(const Field& u, const Potential& w, double eps, const VortexSet& v, double r) {
  std::vector<Vec2> c;
  for (const auto& cl : v.clusters) c.push_back(cl.a);
  return hopf_masses(u, w, eps, c, r);
}

HopfDifferential hopf_differential(const Field& u, const Potential& w, double eps, const StarDomain& dom,
                                   double margin) {
  const Grid2D& g = u.grid();
  const int n = g.n, total = n * n;
  HopfDifferential out;
  out.re.assign(total, kNaN);
  out.im.assign(total, kNaN);
  out.residual.assign(total, kNaN);
  std::vector<double> f(total, kNaN);
  auto ok = [&](int i, int j) { return i >= 0 && j >= 0 && i < n && j < n && u.defined(g.node(i, j)); };
  ProjectionHint hint;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!ok(i, j)) continue;
      const int node = g.node(i, j);
      f[node] = 2.0 * w.value(u.at_node(node), &hint) / (eps * eps);
      if (!(ok(i + 1, j) && ok(i - 1, j) && ok(i, j + 1) && ok(i, j - 1))) continue;
      const Vec2 ux = (u.at_node(g.node(i + 1, j)) - u.at_node(g.node(i - 1, j))) / (2.0 * g.h);
      const Vec2 uy = (u.at_node(g.node(i, j + 1)) - u.at_node(g.node(i, j - 1))) / (2.0 * g.h);
      out.re[node] = norm2(ux) - norm2(uy);
      out.im[node] = -2.0 * dot(ux, uy);
    }
  const BoundaryDistance bdist(dom);
  auto fin = [&](int i, int j) {
    const int k = g.node(i, j);
    return std::isfinite(out.re[k]) && std::isfinite(f[k]);
  };
  for (int j = 1; j + 1 < n; ++j)
    for (int i = 1; i + 1 < n; ++i) {
      const int node = g.node(i, j);
      if (g.unknown_of[node] < 0) continue;
      if (!(fin(i + 1, j) && fin(i - 1, j) && fin(i, j + 1) && fin(i, j - 1))) continue;
      const int e = node + 1, wst = node - 1, no = node + n, so = node - n;
      const double inv = 1.0 / (2.0 * g.h);
      const double rex = (out.re[e] - out.re[wst]) * inv, rey = (out.re[no] - out.re[so]) * inv;
      const double imx = (out.im[e] - out.im[wst]) * inv, imy = (out.im[no] - out.im[so]) * inv;
      const double fx = (f[e] - f[wst]) * inv, fy = (f[no] - f[so]) * inv;
      // d/dzbar = (d_x + i d_y)/2, d/dz = (d_x - i d_y)/2.
      const double dr = 0.5 * (rex - imy) - 0.5 * fx;
      const double di = 0.5 * (imx + rey) + 0.5 * fy;
      out.residual[node] = std::hypot(dr, di);
      if (bdist(g.position(node), margin) >= margin) {
        out.residual_max = std::max(out.residual_max, out.residual[node]);
        ++out.nodes;
      }
    }
  return out;
}

// ---------------------------------------------------------------------------

RateReport convergence_rates(const std::vector<const Field*>& solutions, const std::vector<double>& eps,
                             const Field& reference, double margin) {
  if (solutions.size() != eps.size()) throw Error(ErrorCode::kInvalidArgument, "solutions and eps lengths differ");
  if (solutions.size() < 2) throw Error(ErrorCode::kInsufficientData, "rates need at least two solutions");
  RateReport rep;
  rep.eps = eps;
  for (const Field* s : solutions) {
    const Grid2D& g = s->grid();
    const int total = g.n * g.n;
    std::vector<Vec2> err(total, Vec2{kNaN, kNaN});
    const auto proj = detail::project_nodes(*s);
    double ve = 0.0, ge = 0.0, tm = 0.0;
    for (int k = 0; k < g.unknowns(); ++k) {
      const int node = g.node_of[k];
      const Vec2 x = g.position(node);
      tm = std::max(tm, std::abs(proj.t[node]));
      if (margin > 0.0 && near_boundary(g, node, margin)) continue;
      const Vec2 r = bilinear(reference, x, true);
      if (!finite(r)) continue;
      err[node] = s->values()[k] - r;
      ve = std::max(ve, norm(err[node]));
    }
    for (int k = 0; k < g.unknowns(); ++k) {
      const int node = g.node_of[k];
      const int nb[4] = {node + 1, node - 1, node + g.n, node - g.n};
      bool all = true;
      for (int q : nb) all = all && finite(err[q]);
      if (!all) continue;
      const Vec2 ex = (err[nb[0]] - err[nb[1]]) / (2.0 * g.h);
      const Vec2 ey = (err[nb[2]] - err[nb[3]]) / (2.0 * g.h);
      ge = std::max(ge, std::sqrt(norm2(ex) + norm2(ey)));
    }
    rep.value_error.push_back(ve);
    rep.gradient_error.push_back(ge);
    rep.t_amplitude.push_back(tm);
  }
  for (std::size_t k = 0; k + 1 < solutions.size(); ++k) {
    const double le = std::log(eps[k] / eps[k + 1]);
    rep.value_order.push_back(std::log(rep.value_error[k] / rep.value_error[k + 1]) / le);
    rep.gradient_order.push_back(std::log(rep.gradient_error[k] / rep.gradient_error[k + 1]) / le);
    rep.t_ratio.push_back(rep.t_amplitude[k] / rep.t_amplitude[k + 1]);
  }
  // Interpolation error of the reference: h^2/8 max |second difference|.
  const Grid2D& rg = reference.grid();
  double d2 = 0.0;
  for (int k = 0; k < rg.unknowns(); ++k) {
    const int node = rg.node_of[k];
    const int nb[4] = {node + 1, node - 1, node + rg.n, node - rg.n};
    bool all = true;
    for (int q : nb) all = all && rg.unknown_of[q] >= 0;
    if (!all) continue;
    const Vec2 c = reference.at_node(node);
    const Vec2 xx = reference.at_node(nb[0]) + reference.at_node(nb[1]) - 2.0 * c;
    const Vec2 yy = reference.at_node(nb[2]) + reference.at_node(nb[3]) - 2.0 * c;
    d2 = std::max(d2, norm(xx) + norm(yy));
  }
  rep.floor = d2 / 8.0;
  for (double e : rep.value_error) rep.below_floor = rep.below_floor || e < rep.floor;
  return rep;
}

BoundednessTerms t_energy_and_dist_grad(const Field& u, double eps, const VortexSet& v) {
  const Grid2D& g = u.grid();
  const auto p = detail::project_nodes(u);
  std::vector<std::uint8_t> good(g.unknowns(), 1);
  for (int k = 0; k < g.unknowns(); ++k) {
    const Vec2 x = g.position(g.node_of[k]);
    for (const auto& d : v.discs)
      if (norm(x - d.x) <= d.radius) good[k] = 0;
  }
  auto tk = [&](int k) { return p.t[g.node_of[k]]; };
  auto dk = [&](int k) { return p.dist[g.node_of[k]]; };
  BoundednessTerms out;
  for (const auto& e : g.edges) {
    const double dd = dk(e.a) - dk(e.b);
    out.dist_grad += dd * dd;
    if (good[e.a] && good[e.b]) {
      const double dt = tk(e.a) - tk(e.b);
      out.t_energy += dt * dt;
    }
  }
  // Anchors sit on the curve, so t = dist = 0 there.
  for (const auto& l : g.links) {
    out.dist_grad += l.weight * dk(l.unknown) * dk(l.unknown);
    if (good[l.unknown]) out.t_energy += l.weight * tk(l.unknown) * tk(l.unknown);
  }
  for (int k = 0; k < g.unknowns(); ++k)
    if (good[k]) out.t_energy += g.area[k] * g.h * g.h * tk(k) * tk(k) / (eps * eps);
  return out;
}

GradientNorms lp_gradient_norms(const Field& u, const std::vector<double>& p, const std::vector<Vec2>& centers,
                                double r) {
  const Grid2D& g = u.grid();
  GradientNorms out;
  out.p = p;
  std::vector<double> grad(g.unknowns(), 0.0);
  for (int k = 0; k < g.unknowns(); ++k) {
    Vec2 ux, uy;
    if (detail::node_gradient(u, g.node_of[k], ux, uy)) grad[k] = std::sqrt(norm2(ux) + norm2(uy));
  }
  for (double q : p) {
    if (!(q >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "L^p exponent must be >= 1");
    double acc = 0.0;
    for (int k = 0; k < g.unknowns(); ++k) acc += g.area[k] * g.h * g.h * std::pow(grad[k], q);
    out.lp.push_back(std::pow(acc, 1.0 / q));
  }
  auto off = [&](int k) { return !detail::near_any(g.position(g.node_of[k]), centers, r); };
  double acc = 0.0;
  for (const auto& e : g.edges)
    if (off(e.a) && off(e.b)) acc += norm2(u.values()[e.a] - u.values()[e.b]);
  for (const auto& l : g.links)
    if (off(l.unknown)) acc += l.weight * norm2(u.values()[l.unknown] - u.anchor_values()[l.anchor]);
  out.masked_h1 = std::sqrt(acc);
  out.masked_energy = 0.5 * acc;
  return out;
}

double masked_l2_distance(const Field& a, const Field& b, const std::vector<Vec2>& centers, double r) {
  const Grid2D& g = a.grid();
  if (&g != &b.grid() && (g.n != b.grid().n || g.unknowns() != b.grid().unknowns()))
    throw Error(ErrorCode::kInvalidArgument, "fields live on different grids");
  double acc = 0.0;
  for (int k = 0; k < g.unknowns(); ++k) {
    if (detail::near_any(g.position(g.node_of[k]), centers, r)) continue;
    acc += g.area[k] * g.h * g.h * norm2(a.values()[k] - b.values()[k]);
  }
  return std::sqrt(acc);
}

}  // namespace glab
