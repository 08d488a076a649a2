#include <algorithm>
#include <cmath>

#include "clothbench/observation.hpp"

namespace clothbench {

namespace {

double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Top-left fill rule in y-down raster space.
bool is_top_left(const Vec2& a, const Vec2& b) {
    double dx = b.x - a.x, dy = b.y - a.y;
    return (dy == 0.0 && dx > 0.0) || dy < 0.0;
}

} // namespace

Observation render_topdown(const ClothState& state, const GarmentTemplate& tmpl,
                           const SimParams& params, int width, int height,
                           const WorldRect& world_rect, const std::vector<std::uint8_t>& keep) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("render: zero-size image");
    const double mpp = world_rect.width / width;
    if (std::abs(world_rect.height / height - mpp) > 1e-9 * std::max(1.0, mpp))
        throw std::invalid_argument("render: world_rect aspect must match image (square pixels)");
    if (!keep.empty() && keep.size() != tmpl.triangles.size())
        throw std::invalid_argument("render: triangle filter size mismatch");

    Observation obs;
    obs.width = width;
    obs.height = height;
    obs.cal = {world_rect.x0, world_rect.y0, mpp};
    obs.mask.assign(static_cast<size_t>(width) * height, 0);
    obs.height_map.assign(static_cast<size_t>(width) * height, 0.0f);

    const double thickness = params.cloth_thickness;
    for (size_t t = 0; t < tmpl.triangles.size(); ++t) {
        if (!keep.empty() && !keep[t]) continue;
        const Triangle& tri = tmpl.triangles[t];
        const Vec3& wa = state.positions[tri.a];
        const Vec3& wb = state.positions[tri.b];
        const Vec3& wc = state.positions[tri.c];
        Vec2 a = obs.cal.to_pixel(wa.x, wa.y);
        Vec2 b = obs.cal.to_pixel(wb.x, wb.y);
        Vec2 c = obs.cal.to_pixel(wc.x, wc.y);
        double ha = wa.z - params.table_height + thickness;
        double hb = wb.z - params.table_height + thickness;
        double hc = wc.z - params.table_height + thickness;

        double area = orient2d(a, b, c);
        if (area == 0.0) continue;
        if (area < 0.0) { // normalize winding; cloth is double-sided
            std::swap(b, c);
            std::swap(hb, hc);
            area = -area;
        }

        int min_x = std::max(0, static_cast<int>(std::ceil(std::min({a.x, b.x, c.x}))));
        int max_x = std::min(width - 1, static_cast<int>(std::floor(std::max({a.x, b.x, c.x}))));
        int min_y = std::max(0, static_cast<int>(std::ceil(std::min({a.y, b.y, c.y}))));
        int max_y = std::min(height - 1, static_cast<int>(std::floor(std::max({a.y, b.y, c.y}))));

        for (int py = min_y; py <= max_y; ++py) {
            for (int px = min_x; px <= max_x; ++px) {
                Vec2 p{static_cast<double>(px), static_cast<double>(py)};
                double w0 = orient2d(b, c, p);
                double w1 = orient2d(c, a, p);
                double w2 = orient2d(a, b, p);
                bool inside = (w0 > 0.0 || (w0 == 0.0 && is_top_left(b, c))) &&
                              (w1 > 0.0 || (w1 == 0.0 && is_top_left(c, a))) &&
                              (w2 > 0.0 || (w2 == 0.0 && is_top_left(a, b)));
                if (!inside) continue;
                double surf = (w0 * ha + w1 * hb + w2 * hc) / area;
                size_t idx = static_cast<size_t>(py) * width + px;
                obs.mask[idx] = 1;
                if (surf > obs.height_map[idx]) obs.height_map[idx] = static_cast<float>(surf);
            }
        }
    }

    obs.mask_pixels = 0;
    for (auto m : obs.mask) obs.mask_pixels += m;
    obs.coverage = static_cast<double>(obs.mask_pixels) * mpp * mpp / tmpl.canonical_area;
    return obs;
}

Observation render_topdown(const ClothState& state, const GarmentTemplate& tmpl,
                           const SimParams& params, int width, int height,
                           const WorldRect& world_rect) {
    return render_topdown(state, tmpl, params, width, height, world_rect, {});
}

double coverage(const Observation& obs, const GarmentTemplate& tmpl) {
    double pixel_area = obs.cal.meters_per_pixel * obs.cal.meters_per_pixel;
    return static_cast<double>(obs.mask_pixels) * pixel_area / tmpl.canonical_area;
}

std::uint64_t mask_digest(const Observation& obs) {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto b : obs.mask) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace clothbench
