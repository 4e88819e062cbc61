#pragma once

#include <string>
#include <vector>

#include "glab/analysis.hpp"
#include "glab/sweep.hpp"
#include "json.hpp"

namespace glab::detail {

using nlohmann::json;

// Writes to path.tmp and renames over path.
void write_text_atomic(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

struct SvgMarker {
  Vec2 x;
  int degree;
};

enum class Palette { kSequential, kCyclic };

// Heatmap of a full-lattice scalar (NaN transparent), block-averaged to at most
// 128 cells per side, with vortex markers.
void write_svg_heatmap(const std::string& path, const Grid2D& g, const std::vector<double>& values, Palette palette,
                       const std::vector<SvgMarker>& markers, const std::string& title);

// Next unused directory <parent>/<prefix>-NNN, created.
std::string fresh_directory(const std::string& parent, const std::string& prefix);

std::vector<CheckResult> evaluate_checks(const json& manifest, const std::vector<json>& results);

// JSON number or null for non-finite values.
json num(double v);

}  // namespace glab::detail
