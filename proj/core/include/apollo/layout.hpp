#pragma once

// Geometric placement of packing circles, for rendering and diagnostics only.

#include <array>
#include <string>
#include <vector>

#include "apollo/descartes.hpp"

namespace apollo {

struct CirclePlacement {
    long double cx = 0;
    long double cy = 0;
    long double radius = 0;
    Curvature curvature = 0;
    int depth = 0;                             // word length that created the circle
    std::array<int, 3> tangent_to{-1, -1, -1};  // placements it was inscribed against
};

inline constexpr int kMaxLayoutDepth = 14;

/// Places every circle reachable by a non-backtracking word of length <= depth
/// from a root with a negative bounding curvature. Root circles come first
/// (in the root's coordinate order). Uses the fact that curvature*center,
/// read as complex numbers, transforms under S_i exactly like curvatures.
std::vector<CirclePlacement> layout_packing(const Quadruple& root, int depth);

/// Stroke-only SVG with one <circle> per placement; coordinates are scaled
/// so the bounding circle is the unit circle and viewBox="-1 -1 2 2".
std::string render_svg(const std::vector<CirclePlacement>& circles);

}  // namespace apollo
