#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "glab/curve.hpp"
#include "glab/expr.hpp"
#include "glab/vec2.hpp"

namespace glab {

struct DomainSpec {
  enum class Kind { kDisc, kRadial };
  Kind kind = Kind::kDisc;
  double radius = 1.0;
  std::string rho = "1";  // kRadial: rho(theta)

  static DomainSpec disc(double r = 1.0) {
    DomainSpec d;
    d.radius = r;
    return d;
  }
  static DomainSpec radial(std::string expr) {
    DomainSpec d;
    d.kind = Kind::kRadial;
    d.rho = std::move(expr);
    return d;
  }
};

// Planar domain {r < rho(theta)} strictly star-shaped about the origin.
class StarDomain {
 public:
  // Throws Error(kNotStarShaped) when rho is not positive or the sampled
  // min x.n / max |x| falls below kStarRatio.
  static StarDomain build(const DomainSpec& spec);

  static constexpr double kStarRatio = 0.05;

  double rho(double theta) const;
  double rho_prime(double theta) const;
  Vec2 boundary_point(double theta) const;
  // Unit outward normal at boundary_point(theta).
  Vec2 outward_normal(double theta) const;
  // |d boundary_point / d theta|.
  double speed(double theta) const;
  bool contains(Vec2 x) const;

  double star_constant() const { return star_c_; }  // min sampled x.n
  double max_radius() const { return max_rho_; }
  double area() const { return area_; }
  bool is_disc() const { return disc_; }
  const std::string& description() const { return text_; }

 private:
  StarDomain() = default;
  Expression rho_;
  bool disc_ = false;
  double radius_ = 1.0;
  double star_c_ = 0.0;
  double max_rho_ = 0.0;
  double area_ = 0.0;
  std::string text_;
};

// Gamma-valued boundary map g(theta) = tau(phi0(theta)) with
// phi0(theta) = d theta + eta0(theta), theta the polar angle on the boundary.
class BoundaryDatum {
 public:
  BoundaryDatum(std::shared_ptr<const PlanarCurve> curve, int degree, Expression eta0);

  double phase(double theta) const { return degree_ * theta + eta0_(theta); }
  Vec2 value(double theta) const { return curve_->tau(phase(theta)); }
  int degree() const { return degree_; }
  const Expression& eta0() const { return eta0_; }
  const PlanarCurve& curve() const { return *curve_; }

 private:
  std::shared_ptr<const PlanarCurve> curve_;
  int degree_ = 0;
  Expression eta0_;
};

enum class NodeKind : std::uint8_t { kInterior, kBoundaryAdjacent, kExterior };

// Cartesian lattice over [-R, R]^2 (R = max rho), indexed node = j*n + i with
// x = -R + i h, y = -R + j h. Unknowns are interior nodes. Fixed values live in
// `anchors`: boundary crossings along grid lines and interior nodes closer than
// kMinCut h to the boundary, which are pinned to g.
struct Grid2D {
  static constexpr double kMinCut = 0.1;

  struct Edge {
    int a;  // unknown indices
    int b;
  };
  // Link from an unknown to a fixed Dirichlet value, energy weight/2 |u - g|^2.
  struct Link {
    int unknown;
    int anchor;
    double weight;
  };
  struct Anchor {
    Vec2 x;        // where g is sampled
    double theta;  // polar angle of x
    int node;      // lattice node pinned to this value, or -1 for a crossing
  };

  int n = 0;
  double R = 0.0;
  double h = 0.0;
  std::vector<NodeKind> kind;
  std::vector<std::uint8_t> in_domain;  // node strictly inside the domain
  std::vector<int> unknown_of;  // node -> unknown or -1
  std::vector<int> node_of;     // unknown -> node
  std::vector<double> area;     // unknown -> fractional dual-cell area (h^2 units)
  std::vector<Edge> edges;
  std::vector<Link> links;
  std::vector<Anchor> anchors;
  // Non-interior nodes with a 4-neighbour inside the domain, including pinned
  // nodes; they carry g at the radial projection (anchor index alongside).
  std::vector<int> boundary_nodes;
  std::vector<int> boundary_anchor;

  int node(int i, int j) const { return j * n + i; }
  Vec2 position(int node) const { return {-R + (node % n) * h, -R + (node / n) * h}; }
  int unknowns() const { return static_cast<int>(node_of.size()); }
  double domain_area() const;  // sum of area * h^2
};

// Throws Error(kGridTooSmall) for n < 64.
std::shared_ptr<const Grid2D> rasterize(const StarDomain& domain, int n);

}  // namespace glab
