#include "glab/field.hpp"

#include <cmath>
#include <limits>

#include "glab/error.hpp"

namespace glab {

Field::Field(std::shared_ptr<const Grid2D> grid, std::shared_ptr<const BoundaryDatum> datum)
    : grid_(std::move(grid)), datum_(std::move(datum)) {
  if (!grid_ || !datum_) throw Error(ErrorCode::kInvalidArgument, "field needs a grid and a boundary datum");
  u_.assign(grid_->unknowns(), Vec2{});
  g_.reserve(grid_->anchors.size());
  for (const auto& a : grid_->anchors) g_.push_back(datum_->value(a.theta));
  anchor_of_node_.assign(static_cast<std::size_t>(grid_->n) * grid_->n, -1);
  for (std::size_t k = 0; k < grid_->boundary_nodes.size(); ++k)
    anchor_of_node_[grid_->boundary_nodes[k]] = grid_->boundary_anchor[k];
}

Vec2 Field::at_node(int node) const {
  const int u = grid_->unknown_of[node];
  if (u >= 0) return u_[u];
  const int a = anchor_of_node_[node];
  if (a >= 0) return g_[a];
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {nan, nan};
}

bool Field::defined(int node) const { return grid_->unknown_of[node] >= 0 || anchor_of_node_[node] >= 0; }

std::vector<double> Field::component(int c) const {
  const int total = grid_->n * grid_->n;
  std::vector<double> out(total);
  for (int node = 0; node < total; ++node) {
    const Vec2 v = at_node(node);
    out[node] = c == 0 ? v.x : v.y;
  }
  return out;
}

}  // namespace glab
