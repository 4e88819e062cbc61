#include "io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "glab/error.hpp"

namespace glab::detail {

namespace fs = std::filesystem;

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp);
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot rename " + tmp + ": " + ec.message());
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

namespace {

struct Rgb {
  double r, g, b;
};

Rgb lerp(const Rgb& a, const Rgb& b, double t) { return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t}; }

// Five-stop approximation of viridis.
Rgb sequential(double x) {
  static const Rgb stops[] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  x = std::clamp(x, 0.0, 1.0) * 4.0;
  const int k = std::min(3, static_cast<int>(x));
  return lerp(stops[k], stops[k + 1], x - k);
}

Rgb cyclic(double x) {
  const double h = (x - std::floor(x)) * 6.0;
  const int k = static_cast<int>(h) % 6;
  const double f = h - std::floor(h);
  const double v = 230.0, lo = 40.0;
  const double up = lo + (v - lo) * f, down = v - (v - lo) * f;
  switch (k) {
    case 0: return {v, up, lo};
    case 1: return {down, v, lo};
    case 2: return {lo, v, up};
    case 3: return {lo, down, v};
    case 4: return {up, lo, v};
    default: return {v, lo, down};
  }
}

std::string hex(const Rgb& c) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(std::lround(c.r)), static_cast<int>(std::lround(c.g)),
                static_cast<int>(std::lround(c.b)));
  return buf;
}

}  // namespace

void write_svg_heatmap(const std::string& path, const Grid2D& g, const std::vector<double>& values, Palette palette,
                       const std::vector<SvgMarker>& markers, const std::string& title) {
  const int block = std::max(1, (g.n + 127) / 128);
  const int cells = (g.n + block - 1) / block;
  std::vector<double> avg(static_cast<std::size_t>(cells) * cells, std::nan(""));
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int bj = 0; bj < cells; ++bj)
    for (int bi = 0; bi < cells; ++bi) {
      double sum = 0.0;
      int cnt = 0;
      // Cyclic data is averaged through the unit circle.
      double sc = 0.0, ss = 0.0;
      for (int j = bj * block; j < std::min(g.n, (bj + 1) * block); ++j)
        for (int i = bi * block; i < std::min(g.n, (bi + 1) * block); ++i) {
          const double v = values[g.node(i, j)];
          if (!std::isfinite(v)) continue;
          sum += v;
          sc += std::cos(v);
          ss += std::sin(v);
          ++cnt;
        }
      if (!cnt) continue;
      const double v = palette == Palette::kCyclic ? std::atan2(ss, sc) : sum / cnt;
      avg[static_cast<std::size_t>(bj) * cells + bi] = v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  const double px = 4.0, size = cells * px, top = 24.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size + top
     << "\" viewBox=\"0 0 " << size << " " << size + top << "\" shape-rendering=\"crispEdges\">\n";
  os << "<text x=\"4\" y=\"16\" font-family=\"sans-serif\" font-size=\"12\">" << title;
  if (palette == Palette::kSequential && std::isfinite(lo)) os << " [" << lo << ", " << hi << "]";
  os << "</text>\n";
  for (int bj = 0; bj < cells; ++bj)
    for (int bi = 0; bi < cells; ++bi) {
      const double v = avg[static_cast<std::size_t>(bj) * cells + bi];
      if (!std::isfinite(v)) continue;
      const Rgb c = palette == Palette::kCyclic ? cyclic(v / kTwoPi) : sequential(hi > lo ? (v - lo) / (hi - lo) : 0.0);
      // Lattice row j grows upwards.
      os << "<rect x=\"" << bi * px << "\" y=\"" << top + (cells - 1 - bj) * px << "\" width=\"" << px
         << "\" height=\"" << px << "\" fill=\"" << hex(c) << "\"/>\n";
    }
  const double scale = size / (2.0 * g.R + g.h);
  for (const SvgMarker& m : markers) {
    const double cx = (m.x.x + g.R + 0.5 * g.h) * scale, cy = top + size - (m.x.y + g.R + 0.5 * g.h) * scale;
    os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"6\" fill=\"none\" stroke=\"white\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << cx + 8 << "\" y=\"" << cy - 8 << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"white\">"
       << (m.degree > 0 ? "+" : "") << m.degree << "</text>\n";
  }
  os << "</svg>\n";
  write_text_atomic(path, os.str());
}

std::string fresh_directory(const std::string& parent, const std::string& prefix) {
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + parent + ": " + ec.message());
  for (int k = 1; k < 100000; ++k) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s-%03d", prefix.c_str(), k);
    const fs::path p = fs::path(parent) / buf;
    // create_directory is atomic: an existing run is never reused.
    if (fs::create_directory(p, ec)) return p.string();
    if (ec) throw Error(ErrorCode::kIo, "cannot create " + p.string() + ": " + ec.message());
  }
  throw Error(ErrorCode::kIo, "no free run directory under " + parent);
}

}  // namespace glab::detail
