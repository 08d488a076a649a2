#pragma once

#include <array>
#include <vector>

#include "clothbench/vec3.hpp"

namespace clothbench {

// Convex hull (Andrew monotone chain), counter-clockwise, no duplicate endpoint.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

// Largest pairwise distance between points (via hull).
double point_set_diameter(const std::vector<Vec2>& points);

struct OrientedRect {
    std::array<Vec2, 4> corners; // in rectangle order (consecutive corners adjacent)
    double area = 0.0;
};

// Minimum-area enclosing rectangle via rotating edge directions of the hull.
OrientedRect min_area_rect(const std::vector<Vec2>& points);

// Orders four corner points clockwise in image coordinates (y down), starting
// from the corner nearest the image's upper-left. Ties on x+y are broken by
// smaller x, then smaller y.
std::array<Vec2, 4> canonicalize_corners(const std::array<Vec2, 4>& corners);

// Index permutation version of the same ordering.
std::array<int, 4> canonical_corner_order(const std::array<Vec2, 4>& corners);

} // namespace clothbench
