#include "clothbench/garment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace clothbench {

std::string to_string(GarmentKind kind) {
    return kind == GarmentKind::Towel ? "towel" : "tee";
}

GarmentKind garment_kind_from_string(const std::string& s) {
    if (s == "towel") return GarmentKind::Towel;
    if (s == "tee" || s == "long_sleeve_tee") return GarmentKind::LongSleeveTee;
    throw std::invalid_argument("unknown garment kind: " + s);
}

bool GarmentTemplate::bonded(int a, int b) const {
    const auto& adj = adjacency[a];
    return std::binary_search(adj.begin(), adj.end(), b);
}

double GarmentTemplate::geodesic_distance(int a, int b) const {
    const int n = particle_count();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    dist[a] = 0.0;
    queue.push({0.0, a});
    std::vector<std::vector<std::pair<int, double>>> edges(n);
    for (const auto& s : springs) {
        if (s.cls == SpringClass::Bend) continue; // surface springs only
        edges[s.a].push_back({s.b, s.rest});
        edges[s.b].push_back({s.a, s.rest});
    }
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[u]) continue;
        if (u == b) return d;
        for (auto [v, w] : edges[u]) {
            if (d + w < dist[v]) {
                dist[v] = d + w;
                queue.push({dist[v], v});
            }
        }
    }
    return dist[b];
}

namespace {

struct LatticeBuilder {
    int nx = 0, ny = 0;
    std::vector<int> index; // -1 where not part of the garment

    int at(int ix, int iy) const {
        if (ix < 0 || iy < 0 || ix >= nx || iy >= ny) return -1;
        return index[static_cast<size_t>(iy) * nx + ix];
    }
};

double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * std::abs(cross(b - a, c - a));
}

void finalize(GarmentTemplate& tmpl, const LatticeBuilder& lat) {
    auto add_spring = [&](int a, int b, SpringClass cls) {
        const Vec2 pa = tmpl.rest_positions[a], pb = tmpl.rest_positions[b];
        tmpl.springs.push_back({a, b, norm(pb - pa), cls});
    };

    for (int iy = 0; iy < lat.ny; ++iy) {
        for (int ix = 0; ix < lat.nx; ++ix) {
            int p = lat.at(ix, iy);
            if (p < 0) continue;
            int right = lat.at(ix + 1, iy);
            int down = lat.at(ix, iy + 1);
            int diag = lat.at(ix + 1, iy + 1);
            int anti = lat.at(ix - 1, iy + 1);
            if (right >= 0) add_spring(p, right, SpringClass::Structural);
            if (down >= 0) add_spring(p, down, SpringClass::Structural);
            if (diag >= 0) add_spring(p, diag, SpringClass::Shear);
            if (anti >= 0) add_spring(p, anti, SpringClass::Shear);
            if (lat.at(ix + 1, iy) >= 0 && lat.at(ix + 2, iy) >= 0)
                add_spring(p, lat.at(ix + 2, iy), SpringClass::Bend);
            if (lat.at(ix, iy + 1) >= 0 && lat.at(ix, iy + 2) >= 0)
                add_spring(p, lat.at(ix, iy + 2), SpringClass::Bend);
            // Quad cell -> two triangles.
            if (right >= 0 && down >= 0 && diag >= 0) {
                tmpl.triangles.push_back({p, right, diag});
                tmpl.triangles.push_back({p, diag, down});
            }
        }
    }

    tmpl.canonical_area = 0.0;
    tmpl.particle_area.assign(tmpl.rest_positions.size(), 0.0);
    for (const auto& t : tmpl.triangles) {
        double area = triangle_area(tmpl.rest_positions[t.a], tmpl.rest_positions[t.b],
                                    tmpl.rest_positions[t.c]);
        tmpl.canonical_area += area;
        tmpl.particle_area[t.a] += area / 3.0;
        tmpl.particle_area[t.b] += area / 3.0;
        tmpl.particle_area[t.c] += area / 3.0;
    }

    tmpl.adjacency.assign(tmpl.rest_positions.size(), {});
    for (const auto& s : tmpl.springs) {
        tmpl.adjacency[s.a].push_back(s.b);
        tmpl.adjacency[s.b].push_back(s.a);
    }
    for (auto& adj : tmpl.adjacency) std::sort(adj.begin(), adj.end());
}

GarmentTemplate build_towel(int resolution, const GarmentDims& dims) {
    GarmentTemplate tmpl;
    tmpl.kind = GarmentKind::Towel;
    tmpl.resolution = resolution;
    tmpl.dims = dims;
    tmpl.spacing = dims.towel_edge / (resolution - 1);

    LatticeBuilder lat;
    lat.nx = lat.ny = resolution;
    lat.index.assign(static_cast<size_t>(lat.nx) * lat.ny, -1);
    const double half = dims.towel_edge / 2.0;
    for (int iy = 0; iy < lat.ny; ++iy) {
        for (int ix = 0; ix < lat.nx; ++ix) {
            lat.index[static_cast<size_t>(iy) * lat.nx + ix] =
                static_cast<int>(tmpl.rest_positions.size());
            tmpl.rest_positions.push_back({ix * tmpl.spacing - half, iy * tmpl.spacing - half});
        }
    }
    // corner1 at (min x, min y), then clockwise in image coordinates (y down).
    tmpl.semantic_labels["corner1"] = lat.at(0, 0);
    tmpl.semantic_labels["corner2"] = lat.at(lat.nx - 1, 0);
    tmpl.semantic_labels["corner3"] = lat.at(lat.nx - 1, lat.ny - 1);
    tmpl.semantic_labels["corner4"] = lat.at(0, lat.ny - 1);

    finalize(tmpl, lat);
    return tmpl;
}

GarmentTemplate build_tee(int resolution, const GarmentDims& dims) {
    GarmentTemplate tmpl;
    tmpl.kind = GarmentKind::LongSleeveTee;
    tmpl.resolution = resolution;
    tmpl.dims = dims;
    const double h = dims.tee_torso_width / (resolution - 1);
    tmpl.spacing = h;

    const int torso_cols = resolution;
    const int torso_rows = static_cast<int>(std::lround(dims.tee_torso_height / h)) + 1;
    const int sleeve_cells = static_cast<int>(std::lround(dims.tee_sleeve_length / h));
    const int sleeve_rows = static_cast<int>(std::lround(dims.tee_sleeve_width / h)) + 1;

    LatticeBuilder lat;
    lat.nx = torso_cols + 2 * sleeve_cells;
    lat.ny = torso_rows;
    lat.index.assign(static_cast<size_t>(lat.nx) * lat.ny, -1);

    const int sc = sleeve_cells; // first torso column
    auto member = [&](int ix, int iy) {
        bool torso = ix >= sc && ix < sc + torso_cols;
        bool sleeve = !torso && iy < sleeve_rows;
        return torso || sleeve;
    };

    const double cx = sc + (torso_cols - 1) / 2.0;
    const double cy = (torso_rows - 1) / 2.0;
    for (int iy = 0; iy < lat.ny; ++iy) {
        for (int ix = 0; ix < lat.nx; ++ix) {
            if (!member(ix, iy)) continue;
            lat.index[static_cast<size_t>(iy) * lat.nx + ix] =
                static_cast<int>(tmpl.rest_positions.size());
            tmpl.rest_positions.push_back({(ix - cx) * h, (iy - cy) * h});
        }
    }

    // Shoulders/waist on the torso corners, sleeve labels at the tip mid-row.
    // "left"/"right" follow the image with the tee upright (y down, x right).
    const int tip_row = (sleeve_rows - 1) / 2;
    tmpl.semantic_labels["left_shoulder"] = lat.at(sc, 0);
    tmpl.semantic_labels["right_shoulder"] = lat.at(sc + torso_cols - 1, 0);
    tmpl.semantic_labels["left_waist"] = lat.at(sc, lat.ny - 1);
    tmpl.semantic_labels["right_waist"] = lat.at(sc + torso_cols - 1, lat.ny - 1);
    tmpl.semantic_labels["left_sleeve"] = lat.at(0, tip_row);
    tmpl.semantic_labels["right_sleeve"] = lat.at(lat.nx - 1, tip_row);

    finalize(tmpl, lat);
    return tmpl;
}

} // namespace

GarmentTemplate build_template(GarmentKind kind, int resolution, const GarmentDims& dims) {
    if (resolution < 8)
        throw std::invalid_argument("garment resolution must be >= 8, got " +
                                    std::to_string(resolution));
    GarmentTemplate tmpl =
        kind == GarmentKind::Towel ? build_towel(resolution, dims) : build_tee(resolution, dims);
    return tmpl;
}

void GarmentTemplate::to_config(KeyValueConfig& cfg) const {
    cfg.set("garment.kind", to_string(kind));
    cfg.set("garment.resolution", static_cast<std::int64_t>(resolution));
    cfg.set("garment.towel_edge", dims.towel_edge);
    cfg.set("garment.tee_torso_width", dims.tee_torso_width);
    cfg.set("garment.tee_torso_height", dims.tee_torso_height);
    cfg.set("garment.tee_sleeve_length", dims.tee_sleeve_length);
    cfg.set("garment.tee_sleeve_width", dims.tee_sleeve_width);
}

GarmentTemplate GarmentTemplate::from_config(const KeyValueConfig& cfg) {
    GarmentDims dims;
    dims.towel_edge = cfg.get_double("garment.towel_edge", dims.towel_edge);
    dims.tee_torso_width = cfg.get_double("garment.tee_torso_width", dims.tee_torso_width);
    dims.tee_torso_height = cfg.get_double("garment.tee_torso_height", dims.tee_torso_height);
    dims.tee_sleeve_length = cfg.get_double("garment.tee_sleeve_length", dims.tee_sleeve_length);
    dims.tee_sleeve_width = cfg.get_double("garment.tee_sleeve_width", dims.tee_sleeve_width);
    GarmentKind kind = garment_kind_from_string(cfg.get_string("garment.kind", "towel"));
    int resolution = static_cast<int>(cfg.get_int("garment.resolution", 25));
    return build_template(kind, resolution, dims);
}

} // namespace clothbench
