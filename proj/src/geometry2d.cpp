#include "clothbench/geometry2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace clothbench {

std::vector<Vec2> convex_hull(std::vector<Vec2> points) {
    std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    points.erase(std::unique(points.begin(), points.end(),
                             [](const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }),
                 points.end());
    const size_t n = points.size();
    if (n <= 2) return points;

    std::vector<Vec2> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], points[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = points[i];
    }
    for (size_t i = n - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], points[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);
    return hull;
}

double point_set_diameter(const std::vector<Vec2>& points) {
    auto hull = convex_hull(points);
    double best = 0.0;
    for (size_t i = 0; i < hull.size(); ++i)
        for (size_t j = i + 1; j < hull.size(); ++j)
            best = std::max(best, norm(hull[j] - hull[i]));
    return best;
}

OrientedRect min_area_rect(const std::vector<Vec2>& points) {
    if (points.empty()) throw std::invalid_argument("min_area_rect: empty point set");
    auto hull = convex_hull(points);
    if (hull.size() == 1) return {{hull[0], hull[0], hull[0], hull[0]}, 0.0};
    if (hull.size() == 2) return {{hull[0], hull[1], hull[1], hull[0]}, 0.0};

    OrientedRect best;
    best.area = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < hull.size(); ++i) {
        Vec2 edge = hull[(i + 1) % hull.size()] - hull[i];
        double len = norm(edge);
        if (len < 1e-12) continue;
        Vec2 u = edge * (1.0 / len);
        Vec2 v{-u.y, u.x};
        double minU = std::numeric_limits<double>::infinity(), maxU = -minU;
        double minV = minU, maxV = -minU;
        for (const auto& p : hull) {
            double pu = dot(p, u), pv = dot(p, v);
            minU = std::min(minU, pu);
            maxU = std::max(maxU, pu);
            minV = std::min(minV, pv);
            maxV = std::max(maxV, pv);
        }
        double area = (maxU - minU) * (maxV - minV);
        if (area < best.area) {
            best.area = area;
            best.corners = {Vec2{minU * u.x + minV * v.x, minU * u.y + minV * v.y},
                            Vec2{maxU * u.x + minV * v.x, maxU * u.y + minV * v.y},
                            Vec2{maxU * u.x + maxV * v.x, maxU * u.y + maxV * v.y},
                            Vec2{minU * u.x + maxV * v.x, minU * u.y + maxV * v.y}};
        }
    }
    return best;
}

std::array<Vec2, 4> canonicalize_corners(const std::array<Vec2, 4>& corners) {
    auto order = canonical_corner_order(corners);
    std::array<Vec2, 4> out;
    for (int i = 0; i < 4; ++i) out[i] = corners[order[i]];
    return out;
}

std::array<int, 4> canonical_corner_order(const std::array<Vec2, 4>& corners) {
    // Start corner: minimize x+y; near-ties (within 2 units) resolved by x then
    // y so the same rule applied to slightly perturbed point sets agrees.
    int start = 0;
    for (int i = 1; i < 4; ++i) {
        double si = corners[i].x + corners[i].y;
        double ss = corners[start].x + corners[start].y;
        if (si < ss - 2.0) {
            start = i;
        } else if (si < ss + 2.0) {
            if (corners[i].x < corners[start].x - 1e-9 ||
                (std::abs(corners[i].x - corners[start].x) <= 1e-9 &&
                 corners[i].y < corners[start].y))
                start = i;
        }
    }
    // Clockwise in image coordinates (y down): next corner from the centroid
    // angle order with positive cross products.
    Vec2 c{(corners[0].x + corners[1].x + corners[2].x + corners[3].x) / 4.0,
           (corners[0].y + corners[1].y + corners[2].y + corners[3].y) / 4.0};
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::atan2(corners[a].y - c.y, corners[a].x - c.x) <
               std::atan2(corners[b].y - c.y, corners[b].x - c.x);
    });
    // atan2 ascending in y-down coordinates is clockwise on screen.
    int pos = 0;
    while (order[pos] != start) ++pos;
    std::array<int, 4> out;
    for (int i = 0; i < 4; ++i) out[i] = order[(pos + i) % 4];
    return out;
}

} // namespace clothbench
