#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "clothbench/config.hpp"
#include "clothbench/vec3.hpp"

namespace clothbench {

enum class GarmentKind { Towel, LongSleeveTee };

std::string to_string(GarmentKind kind);
GarmentKind garment_kind_from_string(const std::string& s);

enum class SpringClass { Structural, Shear, Bend };

struct Spring {
    int a = 0, b = 0;
    double rest = 0.0; // meters, equals rest-pose distance of endpoints
    SpringClass cls = SpringClass::Structural;
};

struct Triangle {
    int a = 0, b = 0, c = 0;
};

// Physical dimensions of the flat rest pose, meters.
struct GarmentDims {
    double towel_edge = 0.30;
    double tee_torso_width = 0.30;
    double tee_torso_height = 0.40;
    double tee_sleeve_length = 0.25;
    double tee_sleeve_width = 0.10;
};

struct GarmentTemplate {
    GarmentKind kind = GarmentKind::Towel;
    int resolution = 0;               // particles per towel edge / across tee torso
    GarmentDims dims;
    double spacing = 0.0;             // lattice spacing, meters

    std::vector<Vec2> rest_positions; // flat rest pose, centered on origin
    std::vector<Triangle> triangles;
    std::vector<Spring> springs;
    std::map<std::string, int> semantic_labels;
    double canonical_area = 0.0;      // sum of rest-pose triangle areas

    std::vector<double> particle_area;     // lumped area share per particle, m^2
    std::vector<std::vector<int>> adjacency; // spring-connected neighbors, sorted

    int particle_count() const { return static_cast<int>(rest_positions.size()); }
    bool bonded(int a, int b) const;

    // Rest-pose surface distance between two particles (shortest path over
    // the spring graph weighted by rest lengths).
    double geodesic_distance(int a, int b) const;

    void to_config(KeyValueConfig& cfg) const;
    static GarmentTemplate from_config(const KeyValueConfig& cfg);
};

// Builds the flat rest-pose mesh. Towel: square grid, labels corner1..corner4
// clockwise from the (min x, min y) corner. Tee: cross-shaped panel with
// labels right_shoulder, left_shoulder, right_sleeve, right_waist, left_waist,
// left_sleeve. Throws std::invalid_argument for resolution < 8.
GarmentTemplate build_template(GarmentKind kind, int resolution, const GarmentDims& dims = {});

} // namespace clothbench
