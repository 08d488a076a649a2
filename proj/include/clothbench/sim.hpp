#pragma once

#include <stdexcept>
#include <vector>

#include "clothbench/config.hpp"
#include "clothbench/garment.hpp"
#include "clothbench/vec3.hpp"

namespace clothbench {

struct SimulationDiverged : std::runtime_error {
    SimulationDiverged() : std::runtime_error("simulation diverged (non-finite state); reduce dt or stiffness") {}
};

struct GripperBusy : std::runtime_error {
    explicit GripperBusy(const std::string& which)
        : std::runtime_error("gripper already attached: " + which) {}
};

struct SimParams {
    double dt = 1.0 / 240.0;   // control tick, seconds
    int substeps = 20;         // integration micro-steps per tick
    double gravity = 9.81;     // m/s^2, acts along -z
    double k_structural = 800.0; // N/m
    double k_shear = 200.0;
    double k_bend = 20.0;
    double damping = 0.8;          // 1/s, global velocity damping
    double spring_damping = 0.08;  // N*s/m along the spring axis
    double friction = 0.6;         // Coulomb-style table friction
    double table_height = 0.0;     // m
    double settle_ke_threshold = 2e-6; // J
    int max_settle_steps = 2400;       // control ticks
    double areal_density = 2.0;        // kg/m^2
    double cloth_thickness = 0.004;    // m, layer offset and rendered surface height
    bool layer_contact = true;         // vertical-only support between layers

    double micro_dt() const { return dt / substeps; }
    void validate() const;

    void to_config(KeyValueConfig& cfg) const;
    static SimParams from_config(const KeyValueConfig& cfg);
};

enum class GripperId { Left, Right };

inline const char* to_string(GripperId g) { return g == GripperId::Left ? "left" : "right"; }

struct Attachment {
    GripperId gripper = GripperId::Left;
    int particle = 0;
    Vec3 target;
};

struct ClothState {
    std::vector<Vec3> positions;
    std::vector<Vec3> velocities;
    std::vector<Attachment> attachments;

    int particle_count() const { return static_cast<int>(positions.size()); }
    const Attachment* find_attachment(GripperId g) const;
};

// Flat rest pose lying on the table, centered at (cx, cy).
ClothState make_flat_state(const GarmentTemplate& tmpl, const SimParams& params,
                           double cx = 0.0, double cy = 0.0);

// One control tick of semi-implicit Euler with table/layer projection and
// attachment enforcement. Deterministic; throws SimulationDiverged on
// non-finite state.
ClothState step(const ClothState& state, const GarmentTemplate& tmpl, const SimParams& params);

// Steps until total kinetic energy drops below params.settle_ke_threshold or
// max_settle_steps control ticks elapse. steps_taken (optional) reports ticks.
ClothState settle(const ClothState& state, const GarmentTemplate& tmpl, const SimParams& params,
                  int* steps_taken = nullptr);

ClothState attach(const ClothState& state, GripperId gripper, int particle);
ClothState detach(const ClothState& state, GripperId gripper);

struct Waypoint {
    double t = 0.0; // seconds from trajectory start, strictly increasing
    Vec3 pos;
};

struct GripperTrajectory {
    std::vector<Waypoint> left;
    std::vector<Waypoint> right;

    double duration() const;
};

// Linearly interpolates gripper targets between waypoints (timestamps snapped
// to the integration grid) while stepping the simulation. Grippers without an
// attachment are ignored.
ClothState move_grippers(const ClothState& state, const GarmentTemplate& tmpl,
                         const SimParams& params, const GripperTrajectory& traj);

// Diagnostics.
double kinetic_energy(const ClothState& state, const GarmentTemplate& tmpl, const SimParams& params);
double mechanical_energy(const ClothState& state, const GarmentTemplate& tmpl, const SimParams& params);
std::vector<double> particle_masses(const GarmentTemplate& tmpl, const SimParams& params);

} // namespace clothbench
