#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include "glab/analysis.hpp"
#include "glab/error.hpp"
#include "lattice_util.hpp"

namespace glab {

using detail::kNaN;

int VortexSet::total_degree() const {
  int s = 0;
  for (const auto& c : clusters) s += c.degree;
  return s;
}

double VortexSet::sum_degree_squared() const {
  double s = 0.0;
  for (const auto& c : clusters) s += static_cast<double>(c.degree) * c.degree;
  return s;
}

std::vector<double> distance_field(const Field& u) { return detail::project_nodes(u).dist; }

namespace {

int winding_of_params(const std::vector<double>& s) {
  double acc = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) acc += wrap_angle(s[(k + 1) % s.size()] - s[k]);
  return static_cast<int>(std::lround(acc / kTwoPi));
}

// Counter-clockwise boundary of the node box [i0, i1] x [j0, j1].
std::vector<int> rect_loop(const Grid2D& g, int i0, int j0, int i1, int j1) {
  std::vector<int> loop;
  if (i0 < 0 || j0 < 0 || i1 >= g.n || j1 >= g.n || i1 <= i0 || j1 <= j0) return loop;
  for (int i = i0; i < i1; ++i) loop.push_back(g.node(i, j0));
  for (int j = j0; j < j1; ++j) loop.push_back(g.node(i1, j));
  for (int i = i1; i > i0; --i) loop.push_back(g.node(i, j1));
  for (int j = j1; j > j0; --j) loop.push_back(g.node(i0, j));
  return loop;
}

// Winding along a loop using precomputed projections; nullopt if undefined
// or outside the tube somewhere.
std::optional<int> loop_winding(const Field& u, const detail::NodeProjection& p, const std::vector<int>& loop) {
  if (loop.empty()) return std::nullopt;
  const double tube = u.datum().curve().tube_radius();
  std::vector<double> s;
  s.reserve(loop.size());
  for (int node : loop) {
    if (!(p.dist[node] < tube)) return std::nullopt;
    s.push_back(p.s[node]);
  }
  return winding_of_params(s);
}

bool loop_defined(const Field& u, const std::vector<int>& loop) {
  if (loop.empty()) return false;
  for (int node : loop)
    if (!u.defined(node)) return false;
  return true;
}

int lattice_i(const Grid2D& g, double x) { return static_cast<int>(std::lround((x + g.R) / g.h)); }

}  // namespace

int winding_number(const Field& u, const std::vector<int>& loop) {
  if (loop.size() < 3) throw Error(ErrorCode::kInvalidArgument, "winding loop needs at least 3 nodes");
  const PlanarCurve& c = u.datum().curve();
  std::vector<Vec2> vals;
  vals.reserve(loop.size());
  for (int node : loop) {
    if (!u.defined(node)) throw Error(ErrorCode::kOutsideTube, "winding loop leaves the lattice field");
    vals.push_back(u.at_node(node));
  }
  return winding_number(c, vals);
}

int winding_number(const PlanarCurve& curve, const std::vector<Vec2>& values) {
  if (values.size() < 3) throw Error(ErrorCode::kInvalidArgument, "winding loop needs at least 3 points");
  std::vector<double> s;
  s.reserve(values.size());
  double hint = kNaN;
  for (const Vec2& z : values) {
    std::optional<TubeCoords> tc;
    if (std::isfinite(hint)) tc = curve.project_from(z, hint);
    const TubeCoords r = tc ? *tc : curve.nearest(z);
    if (!(std::abs(r.t) < curve.tube_radius()))
      throw Error(ErrorCode::kOutsideTube, "winding loop touches the far-from-curve set");
    s.push_back(r.s);
    hint = r.s;
  }
  return winding_of_params(s);
}

std::vector<int> square_loop(const Grid2D& g, int ci, int cj, int half) {
  if (half < 1) throw Error(ErrorCode::kInvalidArgument, "loop half-width must be >= 1");
  auto loop = rect_loop(g, ci - half, cj - half, ci + half, cj + half);
  if (loop.empty()) throw Error(ErrorCode::kInvalidArgument, "loop leaves the lattice");
  return loop;
}

int boundary_degree(const BoundaryDatum& datum, int samples) {
  std::vector<Vec2> vals(samples);
  for (int k = 0; k < samples; ++k) vals[k] = datum.value(-kPi + kTwoPi * k / samples);
  return winding_number(datum.curve(), vals);
}

// ---------------------------------------------------------------------------

VortexSet bad_discs(const Field& u, double eps, double delta2, double lambda) {
  if (!(eps > 0.0) || !(delta2 > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps and delta2 must be positive");
  const Grid2D& g = u.grid();
  const auto p = detail::project_nodes(u);
  VortexSet v;
  v.eps = eps;
  v.delta2 = delta2;

  double gmax = 0.0;
  for (int k = 0; k < g.unknowns(); ++k) {
    Vec2 ux, uy;
    if (detail::node_gradient(u, g.node_of[k], ux, uy)) gmax = std::max(gmax, std::sqrt(norm2(ux) + norm2(uy)));
  }
  v.gradient_constant = eps * gmax;
  v.lambda = lambda > 0.0 ? lambda : 2.0 * delta2 / std::max(v.gradient_constant, 1e-12);
  const double rad = v.lambda * eps;

  std::vector<int> bad;
  for (int node = 0; node < g.n * g.n; ++node)
    if (p.dist[node] > delta2) bad.push_back(node);
  v.bad_nodes = static_cast<int>(bad.size());
  std::stable_sort(bad.begin(), bad.end(), [&](int a, int b) { return p.dist[a] > p.dist[b]; });

  // Greedy maximal family of disjoint lambda eps / 4 discs.
  std::vector<int> centers;
  for (int node : bad) {
    const Vec2 x = g.position(node);
    bool free = true;
    for (int c : centers)
      if (norm(g.position(c) - x) < 0.5 * rad) {
        free = false;
        break;
      }
    if (free) centers.push_back(node);
  }
  v.covered = true;
  for (int node : bad) {
    const Vec2 x = g.position(node);
    bool in = false;
    for (int c : centers)
      if (norm(g.position(c) - x) <= rad + 1e-12) {
        in = true;
        break;
      }
    if (!in) v.covered = false;
  }

  const int reach = static_cast<int>(std::ceil(rad / g.h));
  for (int c : centers) {
    BadDisc d;
    d.x = g.position(c);
    d.radius = rad;
    const int ci = c % g.n, cj = c / g.n;
    for (int j = cj - reach - 1; j <= cj + reach + 1; ++j)
      for (int i = ci - reach - 1; i <= ci + reach + 1; ++i) {
        const bool inside = i >= 0 && j >= 0 && i < g.n && j < g.n;
        if (inside && norm(g.position(g.node(i, j)) - d.x) > rad) continue;
        if (!inside || g.unknown_of[g.node(i, j)] < 0) {
          std::ostringstream os;
          os << "bad disc at (" << d.x.x << ", " << d.x.y << ") of radius " << rad << " reaches the boundary";
          throw Error(ErrorCode::kBoundaryContact, os.str());
        }
      }
    const auto loop = rect_loop(g, ci - std::max(reach, 1), cj - std::max(reach, 1), ci + std::max(reach, 1),
                                cj + std::max(reach, 1));
    if (auto w = loop_winding(u, p, loop)) {
      d.degree = *w;
      d.degree_defined = true;
    }
    v.discs.push_back(d);
  }

  // Single-linkage merge at centre distance 4 lambda eps.
  const int nd = static_cast<int>(v.discs.size());
  std::vector<int> parent(nd);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int a = 0; a < nd; ++a)
    for (int b = a + 1; b < nd; ++b)
      if (norm(v.discs[a].x - v.discs[b].x) < 4.0 * rad) parent[find(a)] = find(b);
  std::vector<int> root_slot(nd, -1);
  for (int a = 0; a < nd; ++a) {
    const int r = find(a);
    if (root_slot[r] < 0) {
      root_slot[r] = static_cast<int>(v.clusters.size());
      v.clusters.emplace_back();
    }
    v.clusters[root_slot[r]].members.push_back(a);
  }

  for (std::size_t ci = 0; ci < v.clusters.size(); ++ci) {
    VortexCluster& cl = v.clusters[ci];
    // Members are in descending-dist order, so the first is the core node.
    const int core = centers[cl.members.front()];
    const int ii = core % g.n, jj = core / g.n;
    auto vertex = [&](int a, int b, int c) {
      const double fa = p.dist[a], fb = p.dist[b], fc = p.dist[c];
      const double den = fa - 2.0 * fb + fc;
      if (!std::isfinite(den) || den >= 0.0) return 0.0;
      return std::clamp(0.5 * (fa - fc) / den, -0.5, 0.5);
    };
    const double ox = vertex(g.node(ii - 1, jj), core, g.node(ii + 1, jj));
    const double oy = vertex(g.node(ii, jj - 1), core, g.node(ii, jj + 1));
    cl.a = g.position(core) + g.h * Vec2{ox, oy};
    double xmin = cl.a.x, xmax = cl.a.x, ymin = cl.a.y, ymax = cl.a.y;
    for (int m : cl.members) {
      const Vec2 x = v.discs[m].x;
      cl.extent = std::max(cl.extent, norm(x - cl.a));
      xmin = std::min(xmin, x.x);
      xmax = std::max(xmax, x.x);
      ymin = std::min(ymin, x.y);
      ymax = std::max(ymax, x.y);
    }
    // Surrounding loop: member box inflated past lambda eps, grown until it
    // runs entirely through the tube and clear of the other clusters.
    bool found = false, contact = false;
    for (int grow = 0; grow <= 2 * reach + 4 && !found; ++grow) {
      const int pad = std::max(reach, 1) + 1 + grow;
      const int i0 = lattice_i(g, xmin) - pad, i1 = lattice_i(g, xmax) + pad;
      const int j0 = lattice_i(g, ymin) - pad, j1 = lattice_i(g, ymax) + pad;
      const auto loop = rect_loop(g, i0, j0, i1, j1);
      if (!loop_defined(u, loop)) {
        contact = true;
        break;
      }
      bool clear = true;
      for (std::size_t o = 0; o < v.clusters.size() && clear; ++o) {
        if (o == ci) continue;
        for (int m : v.clusters[o].members) {
          const Vec2 x = v.discs[m].x;
          const int mi = lattice_i(g, x.x), mj = lattice_i(g, x.y);
          if (mi >= i0 - reach && mi <= i1 + reach && mj >= j0 - reach && mj <= j1 + reach) clear = false;
        }
      }
      if (!clear) break;
      if (auto w = loop_winding(u, p, loop)) {
        cl.degree = *w;
        found = true;
      }
    }
    if (!found && contact)
      throw Error(ErrorCode::kBoundaryContact, "vortex cluster extends to the domain boundary");
    if (!found) {
      // Fall back on the member disc degrees.
      int sum = 0;
      bool all = true;
      for (int m : cl.members) {
        all = all && v.discs[m].degree_defined;
        sum += v.discs[m].degree;
      }
      if (!all) throw Error(ErrorCode::kOutsideTube, "no admissible loop around a vortex cluster");
      cl.degree = sum;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------

namespace {

// Does the lattice segment pq cross the ray a + r e(alpha), r >= 0?
bool crosses_ray(Vec2 p, Vec2 q, Vec2 a, double alpha) {
  const Vec2 e{std::cos(alpha), std::sin(alpha)};
  const Vec2 d = q - p;
  const double den = cross(d, e);
  if (std::abs(den) < 1e-300) return false;
  const Vec2 ap = a - p;
  const double s = cross(ap, e) / den;  // along pq
  const double r = cross(ap, d) / den;  // along the ray
  return s >= 0.0 && s < 1.0 && r >= 0.0;
}

struct Unwrapped {
  std::vector<double> value;
  int components = 0;
};

// Breadth-first unwrapping of a raw phase over `mask`, seeds tried in order.
// Edges for which `cut` returns true are not traversed.
template <typename Cut>
Unwrapped unwrap(const Grid2D& g, const std::vector<double>& raw, const std::vector<std::uint8_t>& mask,
                 const std::vector<int>& seeds, Cut cut) {
  Unwrapped out;
  out.value.assign(raw.size(), kNaN);
  std::vector<int> order = seeds;
  for (int node = 0; node < g.n * g.n; ++node)
    if (mask[node]) order.push_back(node);
  std::queue<int> q;
  for (int seed : order) {
    if (!mask[seed] || std::isfinite(out.value[seed])) continue;
    ++out.components;
    out.value[seed] = wrap_angle(raw[seed]);
    q.push(seed);
    while (!q.empty()) {
      const int p = q.front();
      q.pop();
      const int i = p % g.n, j = p / g.n;
      const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
      for (const auto& ij : nb) {
        if (ij[0] < 0 || ij[1] < 0 || ij[0] >= g.n || ij[1] >= g.n) continue;
        const int r = g.node(ij[0], ij[1]);
        if (!mask[r] || std::isfinite(out.value[r]) || cut(p, r)) continue;
        out.value[r] = out.value[p] + wrap_angle(raw[r] - raw[p]);
        q.push(r);
      }
    }
  }
  return out;
}

// First plaquette with all corners in the mask whose wrapped increments sum
// to a nonzero multiple of 2 pi; -1 if none.
int find_residue(const Grid2D& g, const std::vector<double>& raw, const std::vector<std::uint8_t>& mask) {
  for (int j = 0; j + 1 < g.n; ++j)
    for (int i = 0; i + 1 < g.n; ++i) {
      const int c[4] = {g.node(i, j), g.node(i + 1, j), g.node(i + 1, j + 1), g.node(i, j + 1)};
      if (!(mask[c[0]] && mask[c[1]] && mask[c[2]] && mask[c[3]])) continue;
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += wrap_angle(raw[c[(k + 1) % 4]] - raw[c[k]]);
      if (std::abs(acc) > kPi) return c[0];
    }
  return -1;
}

std::string where(const Grid2D& g, int node) {
  const Vec2 x = g.position(node);
  std::ostringstream os;
  os << "(" << x.x << ", " << x.y << ")";
  return os.str();
}

}  // namespace

std::vector<double> lift_phase(const Field& u, const std::vector<std::uint8_t>& mask, int seed) {
  const Grid2D& g = u.grid();
  const auto p = detail::project_nodes(u);
  std::vector<std::uint8_t> m(mask.size(), 0);
  for (std::size_t k = 0; k < mask.size(); ++k) m[k] = mask[k] && std::isfinite(p.s[k]);
  const int bad = find_residue(g, p.s, m);
  if (bad >= 0) throw Error(ErrorCode::kUnwrapInconsistent, "phase residue at " + where(g, bad));
  return unwrap(g, p.s, m, {seed}, [](int, int) { return false; }).value;
}

PhaseDecomposition extract_eta(const Field& u, const VortexSet& v) {
  const Grid2D& g = u.grid();
  const int total = g.n * g.n;
  const auto p = detail::project_nodes(u);
  const double tube = u.datum().curve().tube_radius();
  PhaseDecomposition out;

  out.good.assign(total, 0);
  for (int node = 0; node < total; ++node) {
    if (!(p.dist[node] < tube)) continue;
    const Vec2 x = g.position(node);
    bool off = true;
    for (const auto& d : v.discs)
      if (norm(x - d.x) <= d.radius) {
        off = false;
        break;
      }
    out.good[node] = off;
  }

  // Raw phase with the branch of each angle left arbitrary; only wrapped
  // differences of it are used until the rays are fixed.
  std::vector<double> raw(total, kNaN);
  for (int node = 0; node < total; ++node) {
    if (!out.good[node]) continue;
    const Vec2 x = g.position(node);
    double th = 0.0;
    for (const auto& c : v.clusters) th += c.degree * std::atan2(x.y - c.a.y, x.x - c.a.x);
    raw[node] = p.s[node] - th;
  }
  const int resid = find_residue(g, raw, out.good);
  if (resid >= 0)
    throw Error(ErrorCode::kUnwrapInconsistent, "phase residue off the recorded vortices at " + where(g, resid));

  // |grad eta|^2 from wrapped centred differences.
  std::vector<double> grad2(total, kNaN);
  for (int node = 0; node < total; ++node) {
    if (!out.good[node]) continue;
    const int i = node % g.n, j = node / g.n;
    if (i == 0 || j == 0 || i == g.n - 1 || j == g.n - 1) continue;
    const int e = node + 1, w = node - 1, nn = node + g.n, s = node - g.n;
    if (!(out.good[e] && out.good[w] && out.good[nn] && out.good[s])) continue;
    const double gx = wrap_angle(raw[e] - raw[w]) / (2.0 * g.h);
    const double gy = wrap_angle(raw[nn] - raw[s]) / (2.0 * g.h);
    grad2[node] = gx * gx + gy * gy;
  }
  auto sample = [&](Vec2 x, double& val) {
    const double fx = (x.x + g.R) / g.h, fy = (x.y + g.R) / g.h;
    const int i = static_cast<int>(std::floor(fx)), j = static_cast<int>(std::floor(fy));
    if (i < 0 || j < 0 || i + 1 >= g.n || j + 1 >= g.n) return false;
    const double a = fx - i, b = fy - j;
    const double c00 = grad2[g.node(i, j)], c10 = grad2[g.node(i + 1, j)];
    const double c01 = grad2[g.node(i, j + 1)], c11 = grad2[g.node(i + 1, j + 1)];
    val = (1 - a) * (1 - b) * c00 + a * (1 - b) * c10 + (1 - a) * b * c01 + a * b * c11;
    return std::isfinite(val);
  };

  // Good ray per cluster: argmin over 360 angles of the integral of
  // |grad eta|^2 r dr from the edge of the cluster's discs outwards.
  const double step = 0.5 * g.h;
  for (const auto& c : v.clusters) {
    double start = 0.0;
    for (int m : c.members) start = std::max(start, norm(v.discs[m].x - c.a) + v.discs[m].radius);
    double best = std::numeric_limits<double>::infinity(), best_alpha = 0.0, sum = 0.0;
    for (int k = 0; k < 360; ++k) {
      const double alpha = kTwoPi * k / 360.0;
      const Vec2 e{std::cos(alpha), std::sin(alpha)};
      double integral = 0.0;
      for (double r = start + step; r < 2.0 * g.R * std::sqrt(2.0); r += step) {
        const Vec2 x = c.a + r * e;
        if (std::abs(x.x) > g.R || std::abs(x.y) > g.R) break;
        double val;
        if (sample(x, val)) {
          integral += val * r * step;
        } else {
          // Leaves the good set: outside the domain ends the ray, another
          // vortex's discs are stepped over.
          const int node = g.node(std::clamp(lattice_i(g, x.x), 0, g.n - 1), std::clamp(lattice_i(g, x.y), 0, g.n - 1));
          if (!u.defined(node)) break;
        }
      }
      sum += integral;
      if (integral < best) {
        best = integral;
        best_alpha = alpha;
      }
    }
    out.ray_angle.push_back(best_alpha);
    out.ray_integral.push_back(best);
    out.ray_integral_mean.push_back(sum / 360.0);
  }

  const std::size_t nc = v.clusters.size();
  out.ray_nodes.assign(nc, {});
  auto cut = [&](int a, int b) {
    const Vec2 pa = g.position(a), pb = g.position(b);
    for (std::size_t k = 0; k < nc; ++k)
      if (crosses_ray(pa, pb, v.clusters[k].a, out.ray_angle[k])) return true;
    return false;
  };
  for (int node = 0; node < total; ++node) {
    if (!out.good[node]) continue;
    const int i = node % g.n, j = node / g.n;
    if (i + 1 < g.n && out.good[node + 1]) {
      for (std::size_t k = 0; k < nc; ++k)
        if (crosses_ray(g.position(node), g.position(node + 1), v.clusters[k].a, out.ray_angle[k])) {
          out.ray_nodes[k].push_back(node);
          out.ray_nodes[k].push_back(node + 1);
        }
    }
    if (j + 1 < g.n && out.good[node + g.n]) {
      for (std::size_t k = 0; k < nc; ++k)
        if (crosses_ray(g.position(node), g.position(node + g.n), v.clusters[k].a, out.ray_angle[k])) {
          out.ray_nodes[k].push_back(node);
          out.ray_nodes[k].push_back(node + g.n);
        }
    }
  }
  for (auto& r : out.ray_nodes) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }

  // Theta with branch cuts along the chosen rays.
  out.theta.assign(total, kNaN);
  for (int node = 0; node < total; ++node) {
    const Vec2 x = g.position(node);
    double th = 0.0;
    for (std::size_t k = 0; k < nc; ++k) {
      const auto& c = v.clusters[k];
      const double al = out.ray_angle[k];
      th += c.degree * (al + mod_two_pi(std::atan2(x.y - c.a.y, x.x - c.a.x) - al));
    }
    out.theta[node] = th;
  }
  std::vector<double> raw_cut(total, kNaN);
  for (int node = 0; node < total; ++node)
    if (out.good[node]) raw_cut[node] = p.s[node] - out.theta[node];

  std::vector<int> seeds;
  for (int node : g.boundary_nodes)
    if (out.good[node]) seeds.push_back(node);
  auto un = unwrap(g, raw_cut, out.good, seeds, cut);
  out.eta = std::move(un.value);

  double bmin = std::numeric_limits<double>::infinity();
  for (int node : seeds) bmin = std::min(bmin, out.eta[node]);
  if (!std::isfinite(bmin)) bmin = 0.0;
  out.shift = -kTwoPi * std::floor(bmin / kTwoPi);
  out.boundary_min = bmin + out.shift;
  out.phase.assign(total, kNaN);
  const PlanarCurve& curve = u.datum().curve();
  for (int node = 0; node < total; ++node) {
    if (!std::isfinite(out.eta[node])) continue;
    out.eta[node] += out.shift;
    out.phase[node] = out.eta[node] + out.theta[node];
    out.eta_sup = std::max(out.eta_sup, std::abs(out.eta[node]));
    const double err = norm(curve.tau(out.phase[node]) - curve.tau(p.s[node]));
    out.reconstruction_error = std::max(out.reconstruction_error, err);
  }
  return out;
}

// ---------------------------------------------------------------------------

MaxPrincipleReport check_max_principle_values(const Grid2D& g, const std::vector<double>& phi,
                                              const std::vector<double>& t, const std::vector<std::uint8_t>& mask,
                                              double m, double tau_scale) {
  MaxPrincipleReport rep;
  const int n = g.n;
  auto in = [&](int i, int j) { return i >= 0 && j >= 0 && i < n && j < n && mask[g.node(i, j)]; };
  // Third differences at least three steps inside the region: next to the
  // boundary the ghost ring and cut-cell errors are not smooth in phi.
  std::vector<int> depth(phi.size(), -1);
  {
    std::queue<int> q;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        if (!in(i, j)) continue;
        if (!(in(i + 1, j) && in(i - 1, j) && in(i, j + 1) && in(i, j - 1))) {
          depth[g.node(i, j)] = 0;
          q.push(g.node(i, j));
        }
      }
    while (!q.empty()) {
      const int p = q.front();
      q.pop();
      const int i = p % n, j = p / n;
      const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
      for (const auto& ij : nb) {
        if (!in(ij[0], ij[1])) continue;
        const int r = g.node(ij[0], ij[1]);
        if (depth[r] >= 0) continue;
        depth[r] = depth[p] + 1;
        q.push(r);
      }
    }
  }
  auto inner = [&](int i, int j) { return in(i, j) && depth[g.node(i, j)] >= 3; };
  double third = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (inner(i, j) && inner(i + 1, j) && inner(i + 2, j) && inner(i + 3, j)) {
        const double d3 = phi[g.node(i + 3, j)] - 3.0 * phi[g.node(i + 2, j)] + 3.0 * phi[g.node(i + 1, j)] -
                          phi[g.node(i, j)];
        third = std::max(third, std::abs(d3));
      }
      if (inner(i, j) && inner(i, j + 1) && inner(i, j + 2) && inner(i, j + 3)) {
        const double d3 = phi[g.node(i, j + 3)] - 3.0 * phi[g.node(i, j + 2)] + 3.0 * phi[g.node(i, j + 1)] -
                          phi[g.node(i, j)];
        third = std::max(third, std::abs(d3));
      }
    }
  rep.tau_h = tau_scale * third / g.h;

  const double inf = std::numeric_limits<double>::infinity();
  rep.interior_min = rep.boundary_min = rep.phi_min = rep.boundary_phi_min = inf;
  rep.interior_max = rep.boundary_max = rep.phi_max = rep.boundary_phi_max = -inf;
  int interior = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!in(i, j)) continue;
      const int node = g.node(i, j);
      const double f = phi[node], tt = t[node];
      const double lo = f - 0.5 * m * tt * tt, hi = f + 0.5 * m * tt * tt;
      rep.phi_min = std::min(rep.phi_min, f);
      rep.phi_max = std::max(rep.phi_max, f);
      const bool edge = !(in(i + 1, j) && in(i - 1, j) && in(i, j + 1) && in(i, j - 1));
      if (edge) {
        rep.boundary_min = std::min(rep.boundary_min, lo);
        rep.boundary_max = std::max(rep.boundary_max, hi);
        rep.boundary_phi_min = std::min(rep.boundary_phi_min, f);
        rep.boundary_phi_max = std::max(rep.boundary_phi_max, f);
      } else {
        ++interior;
        rep.interior_min = std::min(rep.interior_min, lo);
        rep.interior_max = std::max(rep.interior_max, hi);
      }
    }
  if (interior == 0) throw Error(ErrorCode::kRegionInvalid, "region has no interior nodes");
  rep.passed = rep.interior_min >= rep.boundary_min - rep.tau_h && rep.interior_max <= rep.boundary_max + rep.tau_h;
  rep.phase_bounds =
      rep.phi_min >= rep.boundary_phi_min - rep.tau_h && rep.phi_max <= rep.boundary_phi_max + rep.tau_h;
  std::ostringstream os;
  os << (rep.passed ? "PASS" : "FAIL") << ": interior [" << rep.interior_min << ", " << rep.interior_max
     << "] vs boundary [" << rep.boundary_min << ", " << rep.boundary_max << "], tau_h " << rep.tau_h;
  rep.message = os.str();
  return rep;
}

MaxPrincipleReport check_max_principle(const Field& u, const ConstantsTable& k, const Region& region,
                                       double tau_scale) {
  const Grid2D& g = u.grid();
  const int total = g.n * g.n;
  std::vector<std::uint8_t> mask(total, 0);
  int seed = -1;
  if (!region.full_domain &&
      (region.i0 < 0 || region.j0 < 0 || region.i1 >= g.n || region.j1 >= g.n || region.i1 <= region.i0 ||
       region.j1 <= region.j0))
    throw Error(ErrorCode::kRegionInvalid, "region box is not inside the lattice");
  for (int node = 0; node < total; ++node) {
    const int i = node % g.n, j = node / g.n;
    if (!u.defined(node)) continue;
    if (!region.full_domain && (i < region.i0 || i > region.i1 || j < region.j0 || j > region.j1)) continue;
    mask[node] = 1;
    if (seed < 0) seed = node;
  }
  if (seed < 0) throw Error(ErrorCode::kRegionInvalid, "region contains no field nodes");
  if (!region.full_domain) {
    for (int j = region.j0; j <= region.j1; ++j)
      for (int i = region.i0; i <= region.i1; ++i)
        if (!u.defined(g.node(i, j))) throw Error(ErrorCode::kRegionInvalid, "region box leaves the domain");
  }
  const auto p = detail::project_nodes(u);
  double maxd = 0.0;
  for (int node = 0; node < total; ++node)
    if (mask[node]) maxd = std::max(maxd, p.dist[node]);
  if (maxd > k.delta1) {
    std::ostringstream os;
    os << "dist(u, Gamma) reaches " << maxd << " > delta1 = " << k.delta1 << " on the region";
    throw Error(ErrorCode::kRegionInvalid, os.str());
  }
  std::vector<double> phi;
  try {
    phi = lift_phase(u, mask, seed);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kUnwrapInconsistent)
      throw Error(ErrorCode::kRegionInvalid, std::string("region is not vortex-free: ") + e.what());
    throw;
  }
  auto rep = check_max_principle_values(g, phi, p.t, mask, k.m, tau_scale);
  rep.max_dist = maxd;
  return rep;
}

}  // namespace glab
