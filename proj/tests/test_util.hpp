#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "clothbench/garment.hpp"
#include "clothbench/observation.hpp"
#include "clothbench/sim.hpp"

namespace clothbench::test {

// Hand-built mini template for single-particle / single-spring oracles.
inline GarmentTemplate make_test_template(std::vector<Vec2> rest,
                                          std::vector<std::pair<int, int>> spring_pairs,
                                          double area_per_particle = 1e-4) {
    GarmentTemplate tmpl;
    tmpl.kind = GarmentKind::Towel;
    tmpl.resolution = 0;
    tmpl.spacing = 0.0125;
    tmpl.rest_positions = std::move(rest);
    for (auto [a, b] : spring_pairs) {
        double rest_len = norm(tmpl.rest_positions[b] - tmpl.rest_positions[a]);
        tmpl.springs.push_back({a, b, rest_len, SpringClass::Structural});
    }
    tmpl.particle_area.assign(tmpl.rest_positions.size(), area_per_particle);
    tmpl.canonical_area = area_per_particle * static_cast<double>(tmpl.rest_positions.size());
    tmpl.adjacency.assign(tmpl.rest_positions.size(), {});
    for (const auto& s : tmpl.springs) {
        tmpl.adjacency[s.a].push_back(s.b);
        tmpl.adjacency[s.b].push_back(s.a);
    }
    for (auto& adj : tmpl.adjacency) std::sort(adj.begin(), adj.end());
    return tmpl;
}

inline ClothState make_state(const GarmentTemplate& tmpl, std::vector<Vec3> positions) {
    ClothState st;
    st.positions = std::move(positions);
    st.velocities.assign(tmpl.rest_positions.size(), Vec3{});
    return st;
}

// Mirrors the particles of `fold_side` across the vertical plane through
// (px, py) with normal (nx, ny), lifting them one layer up. Used to build
// folded configurations analytically.
inline ClothState fold_across_line(const ClothState& state, const SimParams& params, double px,
                                   double py, double nx, double ny) {
    ClothState out = state;
    double nlen = std::hypot(nx, ny);
    nx /= nlen;
    ny /= nlen;
    for (auto& p : out.positions) {
        double d = (p.x - px) * nx + (p.y - py) * ny;
        if (d > 0.0) {
            p.x -= 2.0 * d * nx;
            p.y -= 2.0 * d * ny;
            p.z += params.cloth_thickness;
        }
    }
    return out;
}

inline WorldRect default_rect() { return {-0.5, -0.5, 1.0, 1.0}; }

inline double max_table_penetration(const ClothState& st, const SimParams& params) {
    double worst = 0.0;
    for (const auto& p : st.positions) worst = std::max(worst, params.table_height - p.z);
    return worst;
}

inline bool states_bit_identical(const ClothState& a, const ClothState& b) {
    if (a.positions.size() != b.positions.size()) return false;
    for (size_t i = 0; i < a.positions.size(); ++i) {
        if (a.positions[i].x != b.positions[i].x || a.positions[i].y != b.positions[i].y ||
            a.positions[i].z != b.positions[i].z)
            return false;
        if (a.velocities[i].x != b.velocities[i].x || a.velocities[i].y != b.velocities[i].y ||
            a.velocities[i].z != b.velocities[i].z)
            return false;
    }
    return true;
}

} // namespace clothbench::test
