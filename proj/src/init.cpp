#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "glab/analysis.hpp"
#include "glab/error.hpp"
#include "glab/solver.hpp"

namespace glab {

Field init_field(std::shared_ptr<const Grid2D> grid, std::shared_ptr<const BoundaryDatum> datum,
                 const InitStrategy& strategy) {
  if (!grid || !datum) throw Error(ErrorCode::kInvalidArgument, "init_field needs a grid and a boundary datum");
  const int d = datum->degree();
  switch (strategy.kind) {
    case InitStrategy::Kind::kRadial: {
      if (d == 0) throw Error(ErrorCode::kInvalidArgument, "radial initialization needs a nonzero degree");
      const RadialProfile prof = solve_radial(d, strategy.eps);
      Field u(grid, datum);
      for (int k = 0; k < grid->unknowns(); ++k) {
        const Vec2 x = grid->position(grid->node_of[k]);
        const double r = norm(x);
        const double th = std::atan2(x.y, x.x);
        u.values()[k] = prof.eval(r) * Vec2{std::cos(d * th), std::sin(d * th)};
      }
      return u;
    }
    case InitStrategy::Kind::kCanonical:
    case InitStrategy::Kind::kPerturbed: {
      std::vector<CanonicalVortex> vs;
      if (strategy.vortices.empty()) {
        if (d != 0) vs.push_back({{0.0, 0.0}, d});
      } else {
        for (const auto& v : strategy.vortices) vs.push_back({v.x, v.degree});
      }
      Field u = canonical_map(grid, datum, vs);
      if (strategy.kind == InitStrategy::Kind::kPerturbed) {
        std::mt19937_64 rng(strategy.seed);
        std::normal_distribution<double> noise(0.0, 1.0);
        for (Vec2& v : u.values()) {
          const double a = noise(rng);
          const double b = noise(rng);
          v += strategy.amplitude * Vec2{a, b};
        }
      }
      return u;
    }
  }
  throw Error(ErrorCode::kInternal, "unknown initialization strategy");
}

// ---------------------------------------------------------------------------

namespace {

template <typename T>
void put(std::ofstream& os, T v) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  os.write(reinterpret_cast<const char*>(&bits), 8);
}

template <typename T>
T get(std::ifstream& is) {
  std::uint64_t bits = 0;
  is.read(reinterpret_cast<char*>(&bits), 8);
  if (!is) throw Error(ErrorCode::kIo, "truncated checkpoint");
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  T v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void write_checkpoint(const std::string& path, const Field& u, double eps) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot write checkpoint " + path);
  const Grid2D& g = u.grid();
  put<std::int64_t>(os, g.n);
  put<double>(os, g.h);
  put<double>(os, eps);
  for (int c = 0; c < 2; ++c) {
    for (double v : u.component(c)) put<double>(os, v);
  }
  if (!os) throw Error(ErrorCode::kIo, "failed writing checkpoint " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kMissingFile, "checkpoint not found: " + path);
  Checkpoint ck;
  ck.n = get<std::int64_t>(is);
  ck.h = get<double>(is);
  ck.eps = get<double>(is);
  if (ck.n <= 0 || ck.n > 100000) throw Error(ErrorCode::kIo, "corrupt checkpoint header in " + path);
  const std::size_t total = static_cast<std::size_t>(ck.n) * static_cast<std::size_t>(ck.n);
  ck.u1.resize(total);
  ck.u2.resize(total);
  for (auto& v : ck.u1) v = get<double>(is);
  for (auto& v : ck.u2) v = get<double>(is);
  return ck;
}

void load_checkpoint(const Checkpoint& ck, Field& u) {
  const Grid2D& g = u.grid();
  if (ck.n != g.n || std::abs(ck.h - g.h) > 1e-12 * g.h)
    throw Error(ErrorCode::kInvalidArgument, "checkpoint lattice does not match the grid");
  for (int k = 0; k < g.unknowns(); ++k) {
    const int node = g.node_of[k];
    const double a = ck.u1[node], b = ck.u2[node];
    if (!std::isfinite(a) || !std::isfinite(b)) throw Error(ErrorCode::kIo, "checkpoint has no value at an unknown");
    u.values()[k] = {a, b};
  }
}

}  // namespace glab
