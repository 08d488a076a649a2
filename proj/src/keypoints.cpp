#include "clothbench/keypoints.hpp"

#include <algorithm>
#include <cmath>

#include "clothbench/geometry2d.hpp"

namespace clothbench {

KeypointSchema KeypointSchema::for_kind(GarmentKind kind) {
    KeypointSchema schema;
    schema.kind = kind;
    if (kind == GarmentKind::Towel) {
        schema.names = {"corner1", "corner2", "corner3", "corner4"};
    } else {
        schema.names = {"right_shoulder", "left_shoulder", "right_sleeve",
                        "right_waist",    "left_waist",    "left_sleeve"};
    }
    return schema;
}

int KeypointSchema::required_visible() const {
    return kind == GarmentKind::Towel ? 4 : 5;
}

int KeypointSet::visible_count() const {
    int n = 0;
    for (const auto& [name, kp] : points) n += kp.visible ? 1 : 0;
    return n;
}

bool keypoints_sufficient(const KeypointSet& set, const KeypointSchema& schema) {
    int visible = 0;
    for (const auto& name : schema.names) {
        auto it = set.points.find(name);
        if (it != set.points.end() && it->second.visible) ++visible;
    }
    return visible >= schema.required_visible();
}

std::optional<double> mean_pixel_error(const KeypointSet& a, const KeypointSet& b) {
    double sum = 0.0;
    int n = 0;
    for (const auto& [name, kp] : a.points) {
        if (!kp.visible) continue;
        auto it = b.points.find(name);
        if (it == b.points.end() || !it->second.visible) continue;
        sum += norm(kp.pixel - it->second.pixel);
        ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / n;
}

namespace {

bool inside_image(const Observation& obs, const Vec2& px) {
    return px.x >= 0.0 && px.y >= 0.0 && px.x <= obs.width - 1 && px.y <= obs.height - 1;
}

bool mask_support_nearby(const Observation& obs, const Vec2& px, int radius = 5) {
    int cx = static_cast<int>(std::lround(px.x));
    int cy = static_cast<int>(std::lround(px.y));
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            if (dx * dx + dy * dy > radius * radius) continue;
            int x = cx + dx, y = cy + dy;
            if (x < 0 || y < 0 || x >= obs.width || y >= obs.height) continue;
            if (obs.at(x, y)) return true;
        }
    }
    return false;
}

} // namespace

KeypointSet oracle_detect(const ClothState& state, const GarmentTemplate& tmpl,
                          const SimParams& params, const Observation& obs, double height_tol) {
    KeypointSet set;
    set.kind = tmpl.kind;

    auto project = [&](int particle) {
        const Vec3& p = state.positions[particle];
        Keypoint kp;
        kp.pixel = obs.cal.to_pixel(p.x, p.y);
        if (inside_image(obs, kp.pixel)) {
            int px = static_cast<int>(std::lround(kp.pixel.x));
            int py = static_cast<int>(std::lround(kp.pixel.y));
            double surface = p.z - params.table_height + params.cloth_thickness;
            double top = obs.height_at(px, py);
            kp.visible = top - surface <= height_tol;
            kp.confidence = kp.visible ? 1.0 : 0.0;
        }
        return kp;
    };

    if (tmpl.kind == GarmentKind::Towel) {
        // Mesh corners get their names from image positions: corner1 nearest
        // the upper-left, then clockwise.
        std::array<Keypoint, 4> kps;
        std::array<Vec2, 4> px;
        for (int i = 0; i < 4; ++i) {
            kps[i] = project(tmpl.semantic_labels.at("corner" + std::to_string(i + 1)));
            px[i] = kps[i].pixel;
        }
        auto order = canonical_corner_order(px);
        for (int i = 0; i < 4; ++i)
            set.points["corner" + std::to_string(i + 1)] = kps[order[i]];
    } else {
        for (const auto& [name, particle] : tmpl.semantic_labels)
            set.points[name] = project(particle);
    }
    return set;
}

namespace {

KeypointSet detect_towel(const Observation& obs) {
    auto geom = mask_geometry(obs);
    std::vector<Vec2> pts;
    pts.reserve(geom.boundary.size());
    for (auto [x, y] : geom.boundary) pts.push_back({static_cast<double>(x), static_cast<double>(y)});
    auto rect = min_area_rect(pts);
    auto corners = canonicalize_corners(rect.corners);

    KeypointSet set;
    set.kind = GarmentKind::Towel;
    for (int i = 0; i < 4; ++i) {
        Keypoint kp;
        kp.pixel = corners[i];
        kp.visible = inside_image(obs, kp.pixel) && mask_support_nearby(obs, kp.pixel);
        kp.confidence = kp.visible ? 1.0 : 0.0;
        set.points["corner" + std::to_string(i + 1)] = kp;
    }
    return set;
}

struct CanonicalSilhouette {
    std::vector<Vec2> samples;              // foreground pixels relative to the centroid
    std::map<std::string, Vec2> keypoints;  // label pixels relative to the centroid
};

// Rest-pose silhouette rasterized at the observation scale.
CanonicalSilhouette canonical_silhouette(const Observation& obs, const GarmentTemplate& tmpl) {
    SimParams flat_params; // only the raster geometry matters here
    ClothState rest;
    rest.positions.reserve(tmpl.rest_positions.size());
    for (const auto& p : tmpl.rest_positions) rest.positions.push_back({p.x, p.y, 0.0});
    rest.velocities.assign(tmpl.rest_positions.size(), Vec3{});

    double extent = obs.width * obs.cal.meters_per_pixel;
    double extent_y = obs.height * obs.cal.meters_per_pixel;
    WorldRect rect{-extent / 2.0, -extent_y / 2.0, extent, extent_y};
    Observation canon = render_topdown(rest, tmpl, flat_params, obs.width, obs.height, rect);

    CanonicalSilhouette sil;
    double sx = 0.0, sy = 0.0;
    int count = 0;
    for (int y = 0; y < canon.height; ++y)
        for (int x = 0; x < canon.width; ++x)
            if (canon.at(x, y)) {
                sx += x;
                sy += y;
                ++count;
            }
    Vec2 centroid{sx / count, sy / count};
    const int stride = 2;
    for (int y = 0; y < canon.height; y += stride)
        for (int x = 0; x < canon.width; x += stride)
            if (canon.at(x, y)) sil.samples.push_back(Vec2{static_cast<double>(x), static_cast<double>(y)} - centroid);
    for (const auto& [name, particle] : tmpl.semantic_labels) {
        const Vec2& p = tmpl.rest_positions[particle];
        sil.keypoints[name] = canon.cal.to_pixel(p.x, p.y) - centroid;
    }
    return sil;
}

KeypointSet detect_tee(const Observation& obs, const GarmentTemplate& tmpl) {
    auto geom = mask_geometry(obs);
    auto sil = canonical_silhouette(obs, tmpl);

    auto overlap = [&](double angle) {
        double c = std::cos(angle), s = std::sin(angle);
        int hits = 0;
        for (const auto& sample : sil.samples) {
            int x = static_cast<int>(std::lround(geom.centroid.x + c * sample.x - s * sample.y));
            int y = static_cast<int>(std::lround(geom.centroid.y + s * sample.x + c * sample.y));
            if (x < 0 || y < 0 || x >= obs.width || y >= obs.height) continue;
            hits += obs.at(x, y) ? 1 : 0;
        }
        return static_cast<double>(hits) / static_cast<double>(sil.samples.size());
    };

    double best_angle = 0.0, best_score = -1.0;
    for (int k = 0; k < 90; ++k) {
        double angle = k * (2.0 * M_PI / 90.0);
        double score = overlap(angle);
        if (score > best_score) {
            best_score = score;
            best_angle = angle;
        }
    }
    for (double d = -3.0; d <= 3.0; d += 1.0) {
        double angle = best_angle + d * M_PI / 180.0;
        double score = overlap(angle);
        if (score > best_score) {
            best_score = score;
            best_angle = angle;
        }
    }

    KeypointSet set;
    set.kind = GarmentKind::LongSleeveTee;
    double c = std::cos(best_angle), s = std::sin(best_angle);
    for (const auto& [name, rel] : sil.keypoints) {
        Keypoint kp;
        kp.pixel = {geom.centroid.x + c * rel.x - s * rel.y,
                    geom.centroid.y + s * rel.x + c * rel.y};
        kp.visible = inside_image(obs, kp.pixel) && mask_support_nearby(obs, kp.pixel);
        kp.confidence = kp.visible ? std::min(1.0, best_score) : 0.0;
        set.points[name] = kp;
    }
    return set;
}

} // namespace

KeypointSet heuristic_detect(const Observation& obs, const GarmentTemplate& tmpl) {
    if (obs.mask_pixels == 0) throw NoFabricVisible{};
    return tmpl.kind == GarmentKind::Towel ? detect_towel(obs) : detect_tee(obs, tmpl);
}

} // namespace clothbench
