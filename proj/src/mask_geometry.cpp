#include <cmath>
#include <vector>

#include "clothbench/geometry2d.hpp"
#include "clothbench/observation.hpp"

namespace clothbench {

MaskGeometry mask_geometry(const Observation& obs) {
    const int w = obs.width, h = obs.height;
    if (obs.mask_pixels == 0) throw NoFabricVisible{};

    // Background reachable from the image border (4-connected), so enclosed
    // holes do not contribute to the outer contour.
    std::vector<std::uint8_t> outside(static_cast<size_t>(w) * h, 0);
    std::vector<std::pair<int, int>> stack;
    auto push_bg = [&](int x, int y) {
        size_t idx = static_cast<size_t>(y) * w + x;
        if (obs.mask[idx] == 0 && !outside[idx]) {
            outside[idx] = 1;
            stack.push_back({x, y});
        }
    };
    for (int x = 0; x < w; ++x) {
        push_bg(x, 0);
        push_bg(x, h - 1);
    }
    for (int y = 0; y < h; ++y) {
        push_bg(0, y);
        push_bg(w - 1, y);
    }
    while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        if (x > 0) push_bg(x - 1, y);
        if (x + 1 < w) push_bg(x + 1, y);
        if (y > 0) push_bg(x, y - 1);
        if (y + 1 < h) push_bg(x, y + 1);
    }

    MaskGeometry geom;
    double sx = 0.0, sy = 0.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!obs.at(x, y)) continue;
            sx += x;
            sy += y;
            bool on_border = x == 0 || y == 0 || x == w - 1 || y == h - 1;
            bool boundary = on_border;
            for (int dy = -1; !boundary && dy <= 1; ++dy)
                for (int dx = -1; !boundary && dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    int nx = x + dx, ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    if (outside[static_cast<size_t>(ny) * w + nx]) boundary = true;
                }
            if (boundary) geom.boundary.push_back({x, y});
        }
    }
    geom.centroid = {sx / obs.mask_pixels, sy / obs.mask_pixels};

    double mu20 = 0.0, mu02 = 0.0, mu11 = 0.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!obs.at(x, y)) continue;
            double dx = x - geom.centroid.x, dy = y - geom.centroid.y;
            mu20 += dx * dx;
            mu02 += dy * dy;
            mu11 += dx * dy;
        }
    }
    geom.principal_axis = 0.5 * std::atan2(2.0 * mu11, mu20 - mu02);

    std::vector<Vec2> pts;
    pts.reserve(geom.boundary.size());
    for (auto [x, y] : geom.boundary) pts.push_back({static_cast<double>(x), static_cast<double>(y)});
    geom.diameter_px = pts.size() >= 2 ? point_set_diameter(pts) : 0.0;
    return geom;
}

} // namespace clothbench
