#include "glab/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unsupported/Eigen/IterativeSolvers>

#include "glab/error.hpp"
#include "glab/linalg.hpp"

namespace glab {
class JacobianOp;
}

namespace Eigen::internal {
template <>
struct traits<glab::JacobianOp> : public Eigen::internal::traits<Eigen::SparseMatrix<double>> {};
}  // namespace Eigen::internal

namespace glab {

// J = L (x) I + diag(mass D^2 W / eps^2), applied without assembly.
class JacobianOp : public Eigen::EigenBase<JacobianOp> {
 public:
  using Scalar = double;
  using RealScalar = double;
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic, IsRowMajor = false };

  JacobianOp(const SparseMatrix& lap, const std::vector<Sym2>& blocks) : lap_(&lap), blocks_(&blocks) {}
  Eigen::Index rows() const { return 2 * lap_->rows(); }
  Eigen::Index cols() const { return 2 * lap_->cols(); }

  template <typename Rhs>
  Eigen::Product<JacobianOp, Rhs, Eigen::AliasFreeProduct> operator*(const Eigen::MatrixBase<Rhs>& x) const {
    return Eigen::Product<JacobianOp, Rhs, Eigen::AliasFreeProduct>(*this, x.derived());
  }

  void apply(const double* x, double* y) const {
    const Eigen::Index n = lap_->rows();
    using Mat = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;
    Eigen::Map<const Mat> xm(x, n, 2);
    Eigen::Map<Mat> ym(y, n, 2);
    ym.noalias() = (*lap_) * xm;
    const auto& b = *blocks_;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Sym2& h = b[i];
      ym(i, 0) += h.xx * xm(i, 0) + h.xy * xm(i, 1);
      ym(i, 1) += h.xy * xm(i, 0) + h.yy * xm(i, 1);
    }
  }

 private:
  const SparseMatrix* lap_;
  const std::vector<Sym2>* blocks_;
};

}  // namespace glab

namespace Eigen::internal {
template <typename Rhs>
struct generic_product_impl<glab::JacobianOp, Rhs, SparseShape, DenseShape, GemvProduct>
    : generic_product_impl_base<glab::JacobianOp, Rhs, generic_product_impl<glab::JacobianOp, Rhs>> {
  using Scalar = typename Product<glab::JacobianOp, Rhs>::Scalar;
  template <typename Dest>
  static void scaleAndAddTo(Dest& dst, const glab::JacobianOp& lhs, const Rhs& rhs, const Scalar& alpha) {
    Eigen::VectorXd x = rhs;
    Eigen::VectorXd y(x.size());
    lhs.apply(x.data(), y.data());
    dst += alpha * y;
  }
};
}  // namespace Eigen::internal

namespace glab {

namespace {

// Preconditioner handle for MINRES around an externally factored SPD matrix.
class FactorPreconditioner {
 public:
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };
  FactorPreconditioner() = default;
  template <typename M>
  explicit FactorPreconditioner(const M&) {}
  template <typename M>
  FactorPreconditioner& analyzePattern(const M&) { return *this; }
  template <typename M>
  FactorPreconditioner& factorize(const M&) { return *this; }
  template <typename M>
  FactorPreconditioner& compute(const M&) { return *this; }
  template <typename Rhs>
  Eigen::VectorXd solve(const Rhs& b) const { return factor_->solve(b); }
  Eigen::ComputationInfo info() const { return Eigen::Success; }
  void set(const SpdFactor* f) { factor_ = f; }

 private:
  const SpdFactor* factor_ = nullptr;
};

struct System {
  const Grid2D* grid = nullptr;
  SparseMatrix lap;
  Eigen::VectorXd mass;  // h^2 * fractional area
  Eigen::VectorXd b1, b2;
  std::vector<Vec2> anchors;
  double h = 0.0;
};

System make_system(const Field& u) {
  System s;
  const Grid2D& g = u.grid();
  s.grid = &g;
  s.h = g.h;
  s.lap = link_laplacian(g);
  s.mass.resize(g.unknowns());
  for (int i = 0; i < g.unknowns(); ++i) s.mass[i] = g.h * g.h * g.area[i];
  s.anchors = u.anchor_values();
  s.b1 = Eigen::VectorXd::Zero(g.unknowns());
  s.b2 = Eigen::VectorXd::Zero(g.unknowns());
  for (const auto& l : g.links) {
    s.b1[l.unknown] += l.weight * s.anchors[l.anchor].x;
    s.b2[l.unknown] += l.weight * s.anchors[l.anchor].y;
  }
  return s;
}

struct State {
  Eigen::VectorXd u1, u2;
  Eigen::VectorXd dw1, dw2;  // grad W(u)
  Eigen::VectorXd g1, g2;    // energy gradient
  double dirichlet = 0.0;
  double potential = 0.0;
  double energy() const { return dirichlet + potential; }
  double residual = 0.0;
};

void to_vectors(const Field& f, Eigen::VectorXd& u1, Eigen::VectorXd& u2) {
  const auto& v = f.values();
  u1.resize(static_cast<Eigen::Index>(v.size()));
  u2.resize(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    u1[static_cast<Eigen::Index>(i)] = v[i].x;
    u2[static_cast<Eigen::Index>(i)] = v[i].y;
  }
}

void from_vectors(const Eigen::VectorXd& u1, const Eigen::VectorXd& u2, Field& f) {
  auto& v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = {u1[static_cast<Eigen::Index>(i)], u2[static_cast<Eigen::Index>(i)]};
}

double dirichlet_energy(const System& s, const Eigen::VectorXd& u1, const Eigen::VectorXd& u2) {
  double e = 0.0;
  for (const auto& ed : s.grid->edges) {
    const double a = u1[ed.a] - u1[ed.b], b = u2[ed.a] - u2[ed.b];
    e += a * a + b * b;
  }
  for (const auto& l : s.grid->links) {
    const double a = u1[l.unknown] - s.anchors[l.anchor].x, b = u2[l.unknown] - s.anchors[l.anchor].y;
    e += l.weight * (a * a + b * b);
  }
  return 0.5 * e;
}

void evaluate(const System& s, const Potential& w, double eps, std::vector<ProjectionHint>& hints, State& st) {
  const Eigen::Index n = st.u1.size();
  st.dw1.resize(n);
  st.dw2.resize(n);
  double pot = 0.0;
  const double inv = 1.0 / (eps * eps);
  for (Eigen::Index i = 0; i < n; ++i) {
    double wv = 0.0;
    Vec2 g{};
    w.value_and_gradient({st.u1[i], st.u2[i]}, wv, g, &hints[static_cast<std::size_t>(i)]);
    pot += s.mass[i] * wv;
    st.dw1[i] = g.x;
    st.dw2[i] = g.y;
  }
  st.potential = pot * inv;
  st.dirichlet = dirichlet_energy(s, st.u1, st.u2);
  st.g1 = s.lap * st.u1 - s.b1 + inv * s.mass.cwiseProduct(st.dw1);
  st.g2 = s.lap * st.u2 - s.b2 + inv * s.mass.cwiseProduct(st.dw2);
  st.residual = std::sqrt(st.g1.squaredNorm() + st.g2.squaredNorm()) / s.h;
  if (!std::isfinite(st.residual) || !std::isfinite(st.energy())) st.residual = std::numeric_limits<double>::infinity();
}

void record(SolveResult& r, const State& st, bool newton) {
  r.residuals.push_back(st.residual);
  r.energies.push_back(st.energy());
  r.newton.push_back(newton ? 1 : 0);
}

// Core flow loop on an evaluated state; returns true when stop was reached.
bool run_flow(const System& s, const Potential& w, const SolveConfig& cfg, double stop, int budget,
              std::vector<ProjectionHint>& hints, State& st, SolveResult& r) {
  const bool auto_dt = cfg.dt <= 0.0;
  const bool explicit_scheme = cfg.scheme == SolveConfig::Scheme::kExplicit;
  double dt = auto_dt ? 0.25 * cfg.eps * cfg.eps : cfg.dt;
  if (explicit_scheme && auto_dt) {
    const double amin = s.mass.minCoeff();
    double maxdiag = 0.0;
    for (int k = 0; k < s.lap.outerSize(); ++k) maxdiag = std::max(maxdiag, s.lap.coeff(k, k));
    dt = std::min(dt, 0.2 * amin / maxdiag);
  }
  const double inv = 1.0 / (cfg.eps * cfg.eps);
  SpdFactor factor;
  bool factored = false;
  auto refactor = [&]() {
    SparseMatrix k = s.lap;
    for (Eigen::Index i = 0; i < k.rows(); ++i) k.coeffRef(i, i) += s.mass[i] / dt;
    factor.factor(k);
    factored = true;
  };
  State trial;
  int stagnant = 0;
  for (int it = 0; it < budget; ++it) {
    if (st.residual <= stop) {
      r.dt_used = dt;
      return true;
    }
    for (int attempt = 0;; ++attempt) {
      if (explicit_scheme) {
        trial.u1 = st.u1 - dt * st.g1.cwiseQuotient(s.mass);
        trial.u2 = st.u2 - dt * st.g2.cwiseQuotient(s.mass);
      } else {
        if (!factored) refactor();
        const Eigen::VectorXd md = s.mass / dt;
        trial.u1 = factor.solve(md.cwiseProduct(st.u1) + s.b1 - inv * s.mass.cwiseProduct(st.dw1));
        trial.u2 = factor.solve(md.cwiseProduct(st.u2) + s.b2 - inv * s.mass.cwiseProduct(st.dw2));
      }
      std::vector<ProjectionHint> saved = hints;
      evaluate(s, w, cfg.eps, hints, trial);
      const double slack = cfg.energy_slack * std::max(1.0, std::abs(st.energy()));
      if (std::isfinite(trial.energy()) && trial.energy() <= st.energy() + slack) break;
      hints = std::move(saved);
      if (!auto_dt || explicit_scheme || attempt > 30) {
        std::ostringstream os;
        os << "gradient flow diverged at step " << r.iterations << ": energy " << st.energy() << " -> "
           << trial.energy() << " with dt = " << dt;
        throw Error(ErrorCode::kDiverged, os.str());
      }
      dt *= 0.5;
      factored = false;
    }
    const double de = st.energy() - trial.energy();
    std::swap(st, trial);
    ++r.iterations;
    ++r.flow_steps;
    record(r, st, false);
    stagnant = de <= 1e-15 * std::max(1.0, std::abs(st.energy())) ? stagnant + 1 : 0;
    if (stagnant > 200) break;
  }
  r.dt_used = dt;
  return st.residual <= stop;
}

// Newton iterations; returns true at tol. Returns false when a step fails to
// reduce the residual, or with `descent` when every candidate raises the energy.
bool run_newton(const System& s, const Potential& w, const SolveConfig& cfg, std::vector<ProjectionHint>& hints,
                State& st, SolveResult& r, bool descent) {
  const Eigen::Index n = st.u1.size();
  const double inv = 1.0 / (cfg.eps * cfg.eps);
  std::vector<Sym2> blocks(static_cast<std::size_t>(n));
  SpdFactor pfactor;
  std::vector<Eigen::Triplet<double>> trip;
  for (int step = 0; step < cfg.newton_max_steps; ++step) {
    if (st.residual <= cfg.tol) return true;
    trip.clear();
    trip.reserve(static_cast<std::size_t>(2 * s.lap.nonZeros() + 4 * n));
    for (int k = 0; k < s.lap.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator itr(s.lap, k); itr; ++itr) {
        trip.emplace_back(2 * itr.row(), 2 * itr.col(), itr.value());
        trip.emplace_back(2 * itr.row() + 1, 2 * itr.col() + 1, itr.value());
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const Sym2 hz = w.hessian({st.u1[i], st.u2[i]}, &hints[static_cast<std::size_t>(i)]) * (s.mass[i] * inv);
      blocks[static_cast<std::size_t>(i)] = hz;
      const Sym2 a = spectral_abs(hz);
      trip.emplace_back(2 * i, 2 * i, a.xx);
      trip.emplace_back(2 * i, 2 * i + 1, a.xy);
      trip.emplace_back(2 * i + 1, 2 * i, a.xy);
      trip.emplace_back(2 * i + 1, 2 * i + 1, a.yy);
    }
    SparseMatrix p(2 * n, 2 * n);
    p.setFromTriplets(trip.begin(), trip.end());
    pfactor.factor(p);

    Eigen::VectorXd rhs(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      rhs[2 * i] = -st.g1[i];
      rhs[2 * i + 1] = -st.g2[i];
    }
    const JacobianOp jac(s.lap, blocks);
    Eigen::MINRES<JacobianOp, Eigen::Lower | Eigen::Upper, FactorPreconditioner> minres;
    minres.preconditioner().set(&pfactor);
    const double r0 = r.residuals.empty() ? st.residual : r.residuals.front();
    const double forcing = std::clamp(std::min(1e-3, st.residual / std::max(r0, 1e-300)), 1e-12, 1e-3);
    minres.setTolerance(std::max(forcing, cfg.linear_tol * 1e-4));
    minres.setMaxIterations(std::max<Eigen::Index>(200, n / 50));
    minres.compute(jac);
    const Eigen::VectorXd delta = minres.solve(rhs);
    r.linear_iterations += static_cast<int>(minres.iterations());
    if (!delta.allFinite() || minres.error() > 0.5) {
      std::ostringstream os;
      os << "MINRES stagnated (relative residual " << minres.error() << " after " << minres.iterations()
         << " iterations)";
      throw Error(ErrorCode::kLinearSolveFailed, os.str());
    }

    // Backtracking on the residual norm.
    State trial;
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 10; ++ls) {
      trial.u1 = st.u1;
      trial.u2 = st.u2;
      for (Eigen::Index i = 0; i < n; ++i) {
        trial.u1[i] += alpha * delta[2 * i];
        trial.u2[i] += alpha * delta[2 * i + 1];
      }
      std::vector<ProjectionHint> saved = hints;
      evaluate(s, w, cfg.eps, hints, trial);
      // Near a slow translation mode the lattice Hessian can make the step
      // climb by a negligible amount; a branch jump costs far more than this.
      const double climb = std::max(cfg.energy_slack, 1e-7) * std::max(1.0, std::abs(st.energy()));
      const bool downhill = !descent || trial.energy() <= st.energy() + climb;
      if (downhill && trial.residual < (1.0 - 1e-4 * alpha) * st.residual) {
        accepted = true;
        break;
      }
      hints = std::move(saved);
      alpha *= 0.5;
    }
    if (!accepted) return false;
    std::swap(st, trial);
    ++r.iterations;
    ++r.newton_steps;
    record(r, st, true);
  }
  return st.residual <= cfg.tol;
}

SolveResult finish(const Field& u0, const State& st, SolveResult r, bool converged) {
  r.field = u0;
  from_vectors(st.u1, st.u2, r.field);
  r.converged = converged;
  r.final_residual = st.residual;
  return r;
}

}  // namespace

EnergyBreakdown discrete_energy(const Field& u, const Potential& w, double eps) {
  const System s = make_system(u);
  State st;
  to_vectors(u, st.u1, st.u2);
  std::vector<ProjectionHint> hints(static_cast<std::size_t>(st.u1.size()));
  evaluate(s, w, eps, hints, st);
  EnergyBreakdown e;
  e.dirichlet = st.dirichlet;
  e.potential = st.potential;
  return e;
}

std::vector<Vec2> discrete_gradient(const Field& u, const Potential& w, double eps) {
  const System s = make_system(u);
  State st;
  to_vectors(u, st.u1, st.u2);
  std::vector<ProjectionHint> hints(static_cast<std::size_t>(st.u1.size()));
  evaluate(s, w, eps, hints, st);
  std::vector<Vec2> out(static_cast<std::size_t>(st.u1.size()));
  const double inv_h2 = 1.0 / (s.h * s.h);
  for (Eigen::Index i = 0; i < st.u1.size(); ++i) out[static_cast<std::size_t>(i)] = {st.g1[i] * inv_h2, st.g2[i] * inv_h2};
  return out;
}

double residual_norm(const std::vector<Vec2>& r, double h) {
  double acc = 0.0;
  for (const Vec2& v : r) acc += norm2(v);
  return std::sqrt(acc) * h;
}

SolveResult gradient_flow(const Field& u0, const Potential& w, const SolveConfig& cfg, double stop) {
  if (!(cfg.eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps must be positive");
  if (!(cfg.tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tol must be positive");
  const System s = make_system(u0);
  State st;
  to_vectors(u0, st.u1, st.u2);
  std::vector<ProjectionHint> hints(static_cast<std::size_t>(st.u1.size()));
  evaluate(s, w, cfg.eps, hints, st);
  SolveResult r;
  record(r, st, false);
  const double target = stop > 0.0 ? stop : cfg.tol;
  const bool ok = run_flow(s, w, cfg, target, cfg.max_iters, hints, st, r);
  r.message = ok ? "flow reached the residual target" : "flow stopped before the residual target";
  return finish(u0, st, std::move(r), st.residual <= cfg.tol);
}

SolveResult newton_refine(const Field& u0, const Potential& w, const SolveConfig& cfg) {
  const System s = make_system(u0);
  State st;
  to_vectors(u0, st.u1, st.u2);
  std::vector<ProjectionHint> hints(static_cast<std::size_t>(st.u1.size()));
  evaluate(s, w, cfg.eps, hints, st);
  SolveResult r;
  record(r, st, false);
  if (st.residual > cfg.newton_switch) {
    if (!cfg.allow_fallback) {
      throw Error(ErrorCode::kNewtonFailed, "initial residual above the Newton switch threshold");
    }
    r.fallback = true;
    run_flow(s, w, cfg, cfg.newton_switch, cfg.max_iters, hints, st, r);
  }
  bool ok = run_newton(s, w, cfg, hints, st, r, false);
  if (!ok && cfg.allow_fallback) {
    r.fallback = true;
    for (int round = 0; round < 4 && !ok; ++round) {
      const double target = std::max(cfg.tol, 0.1 * st.residual);
      run_flow(s, w, cfg, target, cfg.max_iters, hints, st, r);
      ok = run_newton(s, w, cfg, hints, st, r, false);
    }
  }
  r.message = ok ? "newton converged" : "newton did not reach the tolerance";
  return finish(u0, st, std::move(r), ok);
}

SolveResult solve(const Field& u0, const Potential& w, const SolveConfig& cfg) {
  if (!(cfg.eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps must be positive");
  if (!cfg.newton) return gradient_flow(u0, w, cfg);
  const System s = make_system(u0);
  State st;
  to_vectors(u0, st.u1, st.u2);
  std::vector<ProjectionHint> hints(static_cast<std::size_t>(st.u1.size()));
  evaluate(s, w, cfg.eps, hints, st);
  SolveResult r;
  record(r, st, false);
  // Flow in batches; Newton (energy-decreasing steps only) is tried below the
  // switch residual or when a batch stalls on a slow mode. A failed attempt is
  // rolled back unless it halved the residual.
  constexpr int kBatch = 50;
  double target = cfg.newton_switch;
  bool ok = st.residual <= cfg.tol;
  int idle = 0;
  while (!ok && r.iterations < cfg.max_iters) {
    const double before = st.residual;
    const int budget = std::min(kBatch, cfg.max_iters - r.iterations);
    const bool reached = run_flow(s, w, cfg, std::max(target, cfg.tol), budget, hints, st, r);
    if (st.residual <= cfg.tol) {
      ok = true;
      break;
    }
    const bool stalled = st.residual > 0.9 * before;
    if (!reached && !stalled) continue;
    const State saved = st;
    const auto saved_hints = hints;
    const std::size_t mark = r.residuals.size();
    const int it = r.iterations, ns = r.newton_steps;
    ok = run_newton(s, w, cfg, hints, st, r, true);
    if (ok) break;
    if (st.residual > 0.5 * saved.residual) {
      st = saved;
      hints = saved_hints;
      r.residuals.resize(mark);
      r.energies.resize(mark);
      r.newton.resize(mark);
      r.iterations = it;
      r.newton_steps = ns;
    }
    if (reached) target = std::max(cfg.tol, 0.1 * std::min(target, st.residual));
    idle = st.residual >= 0.999 * before ? idle + 1 : 0;
    if (idle >= 4) break;
  }
  r.message = ok ? "converged" : "residual tolerance not reached";
  return finish(u0, st, std::move(r), ok);
}

}  // namespace glab
