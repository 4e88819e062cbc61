#pragma once

#include <memory>
#include <vector>

#include "glab/domain.hpp"
#include "glab/vec2.hpp"

namespace glab {

// R^2-valued lattice field: values at the unknowns plus the Dirichlet values
// g at every anchor of the grid.
class Field {
 public:
  Field() = default;
  Field(std::shared_ptr<const Grid2D> grid, std::shared_ptr<const BoundaryDatum> datum);

  const Grid2D& grid() const { return *grid_; }
  std::shared_ptr<const Grid2D> grid_ptr() const { return grid_; }
  const BoundaryDatum& datum() const { return *datum_; }
  std::shared_ptr<const BoundaryDatum> datum_ptr() const { return datum_; }

  std::vector<Vec2>& values() { return u_; }
  const std::vector<Vec2>& values() const { return u_; }
  const std::vector<Vec2>& anchor_values() const { return g_; }

  // Value at a lattice node: unknown, boundary-adjacent (g at the radial
  // projection) or NaN outside.
  Vec2 at_node(int node) const;
  bool defined(int node) const;
  // Row-major full-lattice components (NaN outside).
  std::vector<double> component(int c) const;

 private:
  std::shared_ptr<const Grid2D> grid_;
  std::shared_ptr<const BoundaryDatum> datum_;
  std::vector<Vec2> u_;
  std::vector<Vec2> g_;
  std::vector<int> anchor_of_node_;
};

}  // namespace glab
