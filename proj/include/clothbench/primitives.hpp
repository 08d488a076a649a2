#pragma once

#include <optional>
#include <string>

#include "clothbench/actions.hpp"
#include "clothbench/config.hpp"
#include "clothbench/observation.hpp"
#include "clothbench/sim.hpp"

namespace clothbench {

// Trajectory constants for the four primitives. Heights and speeds are
// artifact choices, all config-exposed.
struct PrimitiveParams {
    double grasp_radius = 0.015;        // m, topmost particle within this cylinder
    double pp_lift_height = 0.10;       // pick & place lift
    double pp_release_height = 0.02;
    double drag_height = 0.02;
    double fling_lift_height = 0.35;
    double fling_stretch_ratio = 0.95;  // of the grasped particles' geodesic distance
    double fling_forward_dist = 0.25;
    double fling_speed = 1.5;           // m/s, fling and retreat
    double fling_retreat_dist = 0.30;
    double fling_release_height = 0.03;
    double fling_hang_time = 0.3;       // s, pause after lift so folds fall out
    double fold_apex_height = 0.08;
    double move_speed = 0.4;            // m/s, quasi-static horizontal
    double lift_speed = 0.4;            // m/s, quasi-static vertical
    double default_drag_distance = 0.10;
    double drag_anchor_tolerance = 0.05; // m, anchor pick must be this close to the centroid

    void to_config(KeyValueConfig& cfg) const;
    static PrimitiveParams from_config(const KeyValueConfig& cfg);
};

struct PrimitiveOutcome {
    ClothState state;
    bool grasp_miss = false;
    std::string miss_detail;
};

// Deprojects the pose through the observation calibration and attaches the
// topmost particle within the grasp cylinder; std::nullopt on a miss.
std::optional<int> find_grasp_particle(const ClothState& state, const Observation& obs,
                                       const PrimitiveParams& prim, const PickPose& pose);

ClothState grasp_at(const ClothState& state, const Observation& obs, const PrimitiveParams& prim,
                    const PickPose& pose, GripperId gripper, bool* missed = nullptr);

PrimitiveOutcome execute_pick_place(const ClothState& state, const GarmentTemplate& tmpl,
                                    const SimParams& sim, const PrimitiveParams& prim,
                                    const Observation& obs, const PickPlaceCmd& cmd);

PrimitiveOutcome execute_drag(const ClothState& state, const GarmentTemplate& tmpl,
                              const SimParams& sim, const PrimitiveParams& prim,
                              const Observation& obs, const PickDragCmd& cmd);

PrimitiveOutcome execute_fling(const ClothState& state, const GarmentTemplate& tmpl,
                               const SimParams& sim, const PrimitiveParams& prim,
                               const Observation& obs, const FlingCmd& cmd);

PrimitiveOutcome execute_fold(const ClothState& state, const GarmentTemplate& tmpl,
                              const SimParams& sim, const PrimitiveParams& prim,
                              const Observation& obs, const FoldCmd& cmd);

// Validates, dispatches on the command alternative and executes it.
PrimitiveOutcome execute_command(const ClothState& state, const GarmentTemplate& tmpl,
                                 const SimParams& sim, const PrimitiveParams& prim,
                                 const Observation& obs, const ActionCommand& cmd);

} // namespace clothbench
