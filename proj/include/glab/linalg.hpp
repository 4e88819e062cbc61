#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <vector>

#include "glab/domain.hpp"

namespace glab {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Graph Laplacian of the grid links: sum over edges of |u_a - u_b|^2 plus
// weight |u|^2 for each link to an anchor. Symmetric positive definite.
SparseMatrix link_laplacian(const Grid2D& g);

// Right-hand side sum over links of weight * anchor value.
Eigen::VectorXd link_rhs(const Grid2D& g, const std::vector<double>& anchor_values);

// Sparse Cholesky with the symbolic analysis kept across refactorizations of
// the same pattern.
class SpdFactor {
 public:
  void factor(const SparseMatrix& a);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  bool ok() const { return ok_; }

 private:
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt_;
  Eigen::Index rows_ = -1;
  Eigen::Index nnz_ = -1;
  bool ok_ = false;
};

// Discrete harmonic function with the given anchor values.
std::vector<double> harmonic_extension(const Grid2D& g, const std::vector<double>& anchor_values);

}  // namespace glab
