#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "glab/field.hpp"

namespace glab::detail {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Nearest-point coordinates of u at every node; NaN where u is undefined.
struct NodeProjection {
  std::vector<double> s, t, dist;
};
NodeProjection project_nodes(const Field& u);

// Lattice derivatives of u at a node: centred where both neighbours are
// defined, one-sided otherwise. False if a direction has no defined neighbour.
bool node_gradient(const Field& u, int node, Vec2& ux, Vec2& uy);

// Quadrature weight of a node in h^2 units (dual-cell area, 0 for non-unknowns).
inline double cell_area(const Grid2D& g, int node) {
  const int k = g.unknown_of[node];
  return k >= 0 ? g.area[k] : 0.0;
}

inline bool near_any(Vec2 x, const std::vector<Vec2>& centers, double r) {
  for (const Vec2& c : centers)
    if (norm(x - c) < r) return true;
  return false;
}

}  // namespace glab::detail
