#include "glab/domain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "glab/error.hpp"

namespace glab {

StarDomain StarDomain::build(const DomainSpec& spec) {
  StarDomain d;
  if (spec.kind == DomainSpec::Kind::kDisc) {
    if (!(spec.radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, "disc radius must be positive");
    d.disc_ = true;
    d.radius_ = spec.radius;
    d.rho_ = Expression::constant(spec.radius);
    std::ostringstream os;
    os << "disc(r=" << spec.radius << ")";
    d.text_ = os.str();
  } else {
    d.rho_ = Expression::parse(spec.rho, "theta");
    d.text_ = "radial(" + spec.rho + ")";
  }

  const int n = 4096;
  double min_rho = std::numeric_limits<double>::infinity();
  double min_xn = std::numeric_limits<double>::infinity();
  double area = 0.0;
  for (int k = 0; k < n; ++k) {
    const double th = kTwoPi * k / n;
    const double r = d.rho(th);
    const double rp = d.rho_prime(th);
    if (!std::isfinite(r) || !std::isfinite(rp))
      throw Error(ErrorCode::kInvalidArgument, "domain boundary rho(theta) is not finite");
    min_rho = std::min(min_rho, r);
    d.max_rho_ = std::max(d.max_rho_, r);
    min_xn = std::min(min_xn, r * r / std::hypot(r, rp));
    area += 0.5 * r * r;
  }
  d.area_ = area * kTwoPi / n;
  if (!(min_rho > 0.0)) {
    std::ostringstream os;
    os << "domain boundary rho(theta) must be positive (min sampled " << min_rho << ")";
    throw Error(ErrorCode::kNotStarShaped, os.str());
  }
  if (std::abs(d.rho(0.0) - d.rho(kTwoPi)) > 1e-9 * d.max_rho_)
    throw Error(ErrorCode::kInvalidArgument, "domain boundary rho(theta) is not 2 pi periodic");
  d.star_c_ = min_xn;
  if (min_xn / d.max_rho_ < kStarRatio) {
    std::ostringstream os;
    os << "domain is not strictly star-shaped: min x.n / max |x| = " << min_xn / d.max_rho_ << " < "
       << kStarRatio;
    throw Error(ErrorCode::kNotStarShaped, os.str());
  }
  return d;
}

double StarDomain::rho(double theta) const { return disc_ ? radius_ : rho_(theta); }
double StarDomain::rho_prime(double theta) const { return disc_ ? 0.0 : rho_.derivative(theta); }

Vec2 StarDomain::boundary_point(double theta) const {
  return rho(theta) * Vec2{std::cos(theta), std::sin(theta)};
}

Vec2 StarDomain::outward_normal(double theta) const {
  const double r = rho(theta), rp = rho_prime(theta);
  const Vec2 e{std::cos(theta), std::sin(theta)};
  const Vec2 tan = rp * e + r * perp(e);
  const Vec2 n{tan.y, -tan.x};
  return n / norm(n);
}

double StarDomain::speed(double theta) const { return std::hypot(rho(theta), rho_prime(theta)); }

bool StarDomain::contains(Vec2 x) const {
  const double r = norm(x);
  if (r == 0.0) return true;
  return r < rho(std::atan2(x.y, x.x));
}

// ---------------------------------------------------------------------------

BoundaryDatum::BoundaryDatum(std::shared_ptr<const PlanarCurve> curve, int degree, Expression eta0)
    : curve_(std::move(curve)), degree_(degree), eta0_(std::move(eta0)) {
  if (!curve_) throw Error(ErrorCode::kInvalidArgument, "boundary datum needs a curve");
  if (std::abs(eta0_(0.0) - eta0_(kTwoPi)) > 1e-9 * (1.0 + std::abs(eta0_(0.0))))
    throw Error(ErrorCode::kInvalidArgument, "boundary phase offset eta0 must be 2 pi periodic");
}

// ---------------------------------------------------------------------------

double Grid2D::domain_area() const {
  double a = 0.0;
  for (double w : area) a += w;
  return a * h * h;
}

namespace {

// Fraction s in (0, 1] along p -> q where the boundary is crossed (p inside, q not).
double crossing_fraction(const StarDomain& dom, Vec2 p, Vec2 q) {
  auto f = [&](double s) {
    const Vec2 x = p + s * (q - p);
    const double r = norm(x);
    return r - dom.rho(std::atan2(x.y, x.x));
  };
  if (dom.is_disc()) {
    // |p + s d|^2 = R^2.
    const Vec2 d = q - p;
    const double a = norm2(d), b = 2.0 * dot(p, d), c = norm2(p) - dom.rho(0.0) * dom.rho(0.0);
    const double disc = std::max(0.0, b * b - 4.0 * a * c);
    const double s = (-b + std::sqrt(disc)) / (2.0 * a);
    return std::clamp(s, 0.0, 1.0);
  }
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::shared_ptr<const Grid2D> rasterize(const StarDomain& dom, int n) {
  if (n < 64) {
    throw Error(ErrorCode::kGridTooSmall, "grid size must be at least 64, got " + std::to_string(n));
  }
  auto g = std::make_shared<Grid2D>();
  g->n = n;
  g->R = dom.max_radius();
  g->h = 2.0 * g->R / (n - 1);
  const int total = n * n;
  g->kind.assign(total, NodeKind::kExterior);
  g->in_domain.assign(total, 0);
  for (int node = 0; node < total; ++node) {
    const int i = node % n, j = node / n;
    if (i == 0 || j == 0 || i == n - 1 || j == n - 1) continue;  // keep a ghost ring
    if (dom.contains(g->position(node))) g->in_domain[node] = 1;
  }

  const int di[4] = {1, -1, 0, 0};
  const int dj[4] = {0, 0, 1, -1};
  // Cut fractions per in-domain node and direction (1 when the neighbour is inside).
  std::vector<std::array<double, 4>> cut(total, {1.0, 1.0, 1.0, 1.0});
  std::vector<char> pinned(total, 0);
  for (int node = 0; node < total; ++node) {
    if (!g->in_domain[node]) continue;
    const int i = node % n, j = node / n;
    const Vec2 p = g->position(node);
    for (int k = 0; k < 4; ++k) {
      const int nb = g->node(i + di[k], j + dj[k]);
      if (g->in_domain[nb]) continue;
      cut[node][k] = crossing_fraction(dom, p, g->position(nb));
      if (cut[node][k] < Grid2D::kMinCut) pinned[node] = 1;
    }
  }

  auto radial_anchor = [&](int node) {
    const Vec2 p = g->position(node);
    const double th = (p.x == 0.0 && p.y == 0.0) ? 0.0 : std::atan2(p.y, p.x);
    g->anchors.push_back({dom.boundary_point(th), th, node});
    return static_cast<int>(g->anchors.size()) - 1;
  };

  g->unknown_of.assign(total, -1);
  for (int node = 0; node < total; ++node) {
    if (g->in_domain[node] && !pinned[node]) {
      g->unknown_of[node] = static_cast<int>(g->node_of.size());
      g->node_of.push_back(node);
      g->kind[node] = NodeKind::kInterior;
    }
  }
  // Boundary-adjacent ring, including pinned nodes.
  std::vector<int> anchor_of_node(total, -1);
  for (int node = 0; node < total; ++node) {
    if (g->kind[node] == NodeKind::kInterior) continue;
    const int i = node % n, j = node / n;
    bool adjacent = pinned[node] != 0;
    if (i > 0 && j > 0 && i < n - 1 && j < n - 1) {
      for (int k = 0; k < 4 && !adjacent; ++k) adjacent = g->in_domain[g->node(i + di[k], j + dj[k])] != 0;
    }
    if (!adjacent) continue;
    g->kind[node] = NodeKind::kBoundaryAdjacent;
    anchor_of_node[node] = radial_anchor(node);
    g->boundary_nodes.push_back(node);
    g->boundary_anchor.push_back(anchor_of_node[node]);
  }

  g->area.assign(g->node_of.size(), 0.0);
  for (int u = 0; u < g->unknowns(); ++u) {
    const int node = g->node_of[u];
    const int i = node % n, j = node / n;
    double half[4];
    for (int k = 0; k < 4; ++k) {
      const int nb = g->node(i + di[k], j + dj[k]);
      const int v = g->unknown_of[nb];
      if (v >= 0) {
        half[k] = 0.5;
        if (v > u) g->edges.push_back({u, v});
      } else if (pinned[nb]) {
        half[k] = 0.5;
        g->links.push_back({u, anchor_of_node[nb], 1.0});
      } else {
        const double s = cut[node][k];
        half[k] = std::min(s, 0.5);
        const Vec2 p = g->position(node);
        const Vec2 x = p + s * (g->position(nb) - p);
        g->anchors.push_back({x, std::atan2(x.y, x.x), -1});
        g->links.push_back({u, static_cast<int>(g->anchors.size()) - 1, 1.0 / s});
      }
    }
    g->area[u] = (half[0] + half[1]) * (half[2] + half[3]);
  }
  return g;
}

}  // namespace glab
