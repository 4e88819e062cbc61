#include "glab/linalg.hpp"

#include "glab/error.hpp"

namespace glab {

SparseMatrix link_laplacian(const Grid2D& g) {
  const int n = g.unknowns();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * g.edges.size() + g.links.size());
  for (const auto& e : g.edges) {
    trip.emplace_back(e.a, e.a, 1.0);
    trip.emplace_back(e.b, e.b, 1.0);
    trip.emplace_back(e.a, e.b, -1.0);
    trip.emplace_back(e.b, e.a, -1.0);
  }
  for (const auto& l : g.links) trip.emplace_back(l.unknown, l.unknown, l.weight);
  SparseMatrix a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

Eigen::VectorXd link_rhs(const Grid2D& g, const std::vector<double>& anchor_values) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(g.unknowns());
  for (const auto& l : g.links) b[l.unknown] += l.weight * anchor_values[l.anchor];
  return b;
}

void SpdFactor::factor(const SparseMatrix& a) {
  if (a.rows() != rows_ || a.nonZeros() != nnz_) {
    llt_.analyzePattern(a);
    rows_ = a.rows();
    nnz_ = a.nonZeros();
  }
  llt_.factorize(a);
  ok_ = llt_.info() == Eigen::Success;
  if (!ok_) throw Error(ErrorCode::kLinearSolveFailed, "sparse Cholesky factorization failed");
}

Eigen::VectorXd SpdFactor::solve(const Eigen::VectorXd& b) const { return llt_.solve(b); }

std::vector<double> harmonic_extension(const Grid2D& g, const std::vector<double>& anchor_values) {
  SpdFactor f;
  f.factor(link_laplacian(g));
  const Eigen::VectorXd x = f.solve(link_rhs(g, anchor_values));
  return std::vector<double>(x.data(), x.data() + x.size());
}

}  // namespace glab
