#include <algorithm>
#include <cmath>
#include <sstream>

#include "glab/error.hpp"
#include "glab/solver.hpp"

namespace glab {

double RadialProfile::eval(double radius) const {
  if (radius >= r.back()) return f.back();
  if (radius <= 0.0) return f.front();
  const auto it = std::upper_bound(r.begin(), r.end(), radius);
  const std::size_t i = static_cast<std::size_t>(it - r.begin());
  const double w = (radius - r[i - 1]) / (r[i] - r[i - 1]);
  return (1.0 - w) * f[i - 1] + w * f[i];
}

namespace {

// Thomas algorithm; a sub-, b main, c super-diagonal.
void tridiagonal(std::vector<double> a, std::vector<double> b, std::vector<double> c, std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = a[i] / b[i - 1];
    b[i] -= m * c[i - 1];
    x[i] -= m * x[i - 1];
  }
  x[n - 1] /= b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - c[i] * x[i + 1]) / b[i];
}

}  // namespace

RadialProfile solve_radial(int degree, double eps, int points) {
  if (degree == 0) throw Error(ErrorCode::kInvalidArgument, "radial profile needs |d| >= 1");
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps must be positive");
  if (points < 64) throw Error(ErrorCode::kInvalidArgument, "radial mesh needs at least 64 points");
  RadialProfile p;
  p.degree = degree;
  p.eps = eps;
  const int n = points;
  const double d2 = static_cast<double>(degree) * degree;
  // Mesh graded towards the core: r = (e^{beta x} - 1)/(e^beta - 1).
  const double beta = std::clamp(std::log(1.0 / eps), 0.5, 4.0);
  p.r.resize(n);
  for (int i = 0; i < n; ++i) p.r[i] = std::expm1(beta * i / (n - 1.0)) / std::expm1(beta);
  p.r.front() = 0.0;
  p.r.back() = 1.0;
  p.f.resize(n);
  const double ad = std::abs(degree);
  for (int i = 0; i < n; ++i) p.f[i] = std::pow(std::tanh(p.r[i] / eps) / std::tanh(1.0 / eps), ad);

  const double inv = 1.0 / (eps * eps);
  auto residual = [&](const std::vector<double>& f, std::vector<double>& res) {
    double acc = 0.0;
    for (int i = 1; i < n - 1; ++i) {
      const double hm = p.r[i] - p.r[i - 1], hp = p.r[i + 1] - p.r[i];
      const double fpp = 2.0 * ((f[i + 1] - f[i]) / hp - (f[i] - f[i - 1]) / hm) / (hp + hm);
      const double fp = (hm * hm * (f[i + 1] - f[i]) + hp * hp * (f[i] - f[i - 1])) / (hm * hp * (hm + hp));
      const double ri = p.r[i];
      res[i] = fpp + fp / ri - d2 * f[i] / (ri * ri) - inv * f[i] * (f[i] * f[i] - 1.0);
      acc += res[i] * res[i] * 0.5 * (hp + hm);
    }
    return std::sqrt(acc);
  };

  std::vector<double> res(n, 0.0), a(n - 2), b(n - 2), c(n - 2), dx(n - 2), trial(n);
  double rn = residual(p.f, res);
  int it = 0;
  for (; it < 100 && rn > 1e-10; ++it) {
    for (int i = 1; i < n - 1; ++i) {
      const double hm = p.r[i] - p.r[i - 1], hp = p.r[i + 1] - p.r[i];
      const double ri = p.r[i];
      const double s = hm * hp * (hm + hp);
      const double am = 2.0 / (hm * (hp + hm)) - hp * hp / (s * ri);
      const double ap = 2.0 / (hp * (hp + hm)) + hm * hm / (s * ri);
      const double a0 = -2.0 / (hm * hp) + (hp * hp - hm * hm) / (s * ri) - d2 / (ri * ri) -
                        inv * (3.0 * p.f[i] * p.f[i] - 1.0);
      a[i - 1] = am;
      b[i - 1] = a0;
      c[i - 1] = ap;
      dx[i - 1] = -res[i];
    }
    tridiagonal(a, b, c, dx);
    double lambda = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      trial = p.f;
      for (int i = 1; i < n - 1; ++i) trial[i] += lambda * dx[i - 1];
      std::vector<double> rt(n, 0.0);
      const double rtn = residual(trial, rt);
      if (rtn < (1.0 - 1e-4 * lambda) * rn) {
        p.f = trial;
        res = rt;
        rn = rtn;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
  }
  p.newton_iterations = it;
  // The discrete residual is scaled by 1/eps^2; accept relative to that.
  if (!(rn <= 1e-8 * std::max(1.0, inv))) {
    std::ostringstream os;
    os << "radial boundary value problem did not converge (residual " << rn << ")";
    throw Error(ErrorCode::kNewtonFailed, os.str());
  }
  return p;
}

}  // namespace glab
