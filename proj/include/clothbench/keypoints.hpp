#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clothbench/garment.hpp"
#include "clothbench/observation.hpp"
#include "clothbench/sim.hpp"

namespace clothbench {

struct KeypointSchema {
    GarmentKind kind = GarmentKind::Towel;
    std::vector<std::string> names; // ordered

    static KeypointSchema for_kind(GarmentKind kind);
    int required_visible() const; // towel: all 4; tee: 5 of 6
};

struct Keypoint {
    Vec2 pixel;
    bool visible = false;
    double confidence = 0.0; // 0 when not visible
};

struct KeypointSet {
    GarmentKind kind = GarmentKind::Towel;
    std::map<std::string, Keypoint> points;

    int visible_count() const;
};

// Projects the labeled mesh particles through the observation calibration.
// A point is visible when its surface height is within height_tol of the
// rendered height map at its pixel (top-layer test). Towel corner names are
// canonicalized to the image convention: corner1 nearest the upper-left,
// then clockwise.
KeypointSet oracle_detect(const ClothState& state, const GarmentTemplate& tmpl,
                          const SimParams& params, const Observation& obs,
                          double height_tol = 0.003);

// Mask-based detector. Towel: minimum-area enclosing rectangle corners.
// Tee: canonical silhouette matched by rotation search about the centroid.
// Keypoints without mask support within 5 px are marked invisible.
// Throws NoFabricVisible on an empty mask.
KeypointSet heuristic_detect(const Observation& obs, const GarmentTemplate& tmpl);

bool keypoints_sufficient(const KeypointSet& set, const KeypointSchema& schema);

// Mean distance over keypoints visible in both sets; nullopt when the
// visible intersection is empty.
std::optional<double> mean_pixel_error(const KeypointSet& a, const KeypointSet& b);

} // namespace clothbench
