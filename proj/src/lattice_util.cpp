#include "lattice_util.hpp"

namespace glab::detail {

NodeProjection project_nodes(const Field& u) {
  const Grid2D& g = u.grid();
  const PlanarCurve& c = u.datum().curve();
  const std::size_t total = static_cast<std::size_t>(g.n) * g.n;
  NodeProjection p;
  p.s.assign(total, kNaN);
  p.t.assign(total, kNaN);
  p.dist.assign(total, kNaN);
  double hint = kNaN;
  for (std::size_t node = 0; node < total; ++node) {
    if (!u.defined(static_cast<int>(node))) {
      hint = kNaN;
      continue;
    }
    const Vec2 z = u.at_node(static_cast<int>(node));
    std::optional<TubeCoords> tc;
    if (std::isfinite(hint)) tc = c.project_from(z, hint);
    const TubeCoords r = tc ? *tc : c.nearest(z);
    p.s[node] = r.s;
    p.t[node] = r.t;
    p.dist[node] = std::abs(r.t);
    hint = std::abs(r.t) < c.tube_radius() ? r.s : kNaN;
  }
  return p;
}

bool node_gradient(const Field& u, int node, Vec2& ux, Vec2& uy) {
  const Grid2D& g = u.grid();
  const int i = node % g.n, j = node / g.n;
  auto diff = [&](int di, int dj, Vec2& out) {
    const bool hasp = i + di < g.n && j + dj < g.n && u.defined(g.node(i + di, j + dj));
    const bool hasm = i - di >= 0 && j - dj >= 0 && u.defined(g.node(i - di, j - dj));
    const Vec2 c = u.at_node(node);
    if (hasp && hasm) {
      out = (u.at_node(g.node(i + di, j + dj)) - u.at_node(g.node(i - di, j - dj))) / (2.0 * g.h);
    } else if (hasp) {
      out = (u.at_node(g.node(i + di, j + dj)) - c) / g.h;
    } else if (hasm) {
      out = (c - u.at_node(g.node(i - di, j - dj))) / g.h;
    } else {
      return false;
    }
    return true;
  };
  return diff(1, 0, ux) && diff(0, 1, uy);
}

}  // namespace glab::detail
