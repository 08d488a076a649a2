#include "clothbench/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace clothbench {

void SimParams::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("sim.dt must be > 0");
    if (substeps < 1) throw std::invalid_argument("sim.substeps must be >= 1");
    if (!(k_structural > 0.0 && k_shear > 0.0 && k_bend > 0.0))
        throw std::invalid_argument("spring stiffnesses must be > 0");
    if (friction < 0.0 || friction > 2.0)
        throw std::invalid_argument("friction must be in [0, 2]");
    if (!(settle_ke_threshold > 0.0))
        throw std::invalid_argument("settle threshold must be > 0");
    if (!(areal_density > 0.0)) throw std::invalid_argument("areal density must be > 0");
}

void SimParams::to_config(KeyValueConfig& cfg) const {
    cfg.set("sim.dt", dt);
    cfg.set("sim.substeps", static_cast<std::int64_t>(substeps));
    cfg.set("sim.gravity", gravity);
    cfg.set("sim.k_structural", k_structural);
    cfg.set("sim.k_shear", k_shear);
    cfg.set("sim.k_bend", k_bend);
    cfg.set("sim.damping", damping);
    cfg.set("sim.spring_damping", spring_damping);
    cfg.set("sim.friction", friction);
    cfg.set("sim.table_height", table_height);
    cfg.set("sim.settle_ke_threshold", settle_ke_threshold);
    cfg.set("sim.max_settle_steps", static_cast<std::int64_t>(max_settle_steps));
    cfg.set("sim.areal_density", areal_density);
    cfg.set("sim.cloth_thickness", cloth_thickness);
    cfg.set("sim.layer_contact", layer_contact ? "true" : "false");
}

SimParams SimParams::from_config(const KeyValueConfig& cfg) {
    SimParams p;
    p.dt = cfg.get_double("sim.dt", p.dt);
    p.substeps = static_cast<int>(cfg.get_int("sim.substeps", p.substeps));
    p.gravity = cfg.get_double("sim.gravity", p.gravity);
    p.k_structural = cfg.get_double("sim.k_structural", p.k_structural);
    p.k_shear = cfg.get_double("sim.k_shear", p.k_shear);
    p.k_bend = cfg.get_double("sim.k_bend", p.k_bend);
    p.damping = cfg.get_double("sim.damping", p.damping);
    p.spring_damping = cfg.get_double("sim.spring_damping", p.spring_damping);
    p.friction = cfg.get_double("sim.friction", p.friction);
    p.table_height = cfg.get_double("sim.table_height", p.table_height);
    p.settle_ke_threshold = cfg.get_double("sim.settle_ke_threshold", p.settle_ke_threshold);
    p.max_settle_steps = static_cast<int>(cfg.get_int("sim.max_settle_steps", p.max_settle_steps));
    p.areal_density = cfg.get_double("sim.areal_density", p.areal_density);
    p.cloth_thickness = cfg.get_double("sim.cloth_thickness", p.cloth_thickness);
    p.layer_contact = cfg.get_bool("sim.layer_contact", p.layer_contact);
    p.validate();
    return p;
}

const Attachment* ClothState::find_attachment(GripperId g) const {
    for (const auto& a : attachments)
        if (a.gripper == g) return &a;
    return nullptr;
}

ClothState make_flat_state(const GarmentTemplate& tmpl, const SimParams& params, double cx,
                           double cy) {
    ClothState state;
    state.positions.reserve(tmpl.rest_positions.size());
    for (const auto& p : tmpl.rest_positions)
        state.positions.push_back({p.x + cx, p.y + cy, params.table_height});
    state.velocities.assign(tmpl.rest_positions.size(), Vec3{});
    return state;
}

std::vector<double> particle_masses(const GarmentTemplate& tmpl, const SimParams& params) {
    std::vector<double> mass(tmpl.particle_area.size());
    for (size_t i = 0; i < mass.size(); ++i) mass[i] = params.areal_density * tmpl.particle_area[i];
    return mass;
}

double kinetic_energy(const ClothState& state, const GarmentTemplate& tmpl,
                      const SimParams& params) {
    auto mass = particle_masses(tmpl, params);
    double ke = 0.0;
    for (int i = 0; i < state.particle_count(); ++i)
        ke += 0.5 * mass[i] * norm2(state.velocities[i]);
    return ke;
}

double mechanical_energy(const ClothState& state, const GarmentTemplate& tmpl,
                         const SimParams& params) {
    auto mass = particle_masses(tmpl, params);
    double e = 0.0;
    for (int i = 0; i < state.particle_count(); ++i) {
        e += 0.5 * mass[i] * norm2(state.velocities[i]);
        e += mass[i] * params.gravity * (state.positions[i].z - params.table_height);
    }
    auto stiffness = [&](SpringClass c) {
        switch (c) {
            case SpringClass::Structural: return params.k_structural;
            case SpringClass::Shear: return params.k_shear;
            default: return params.k_bend;
        }
    };
    for (const auto& s : tmpl.springs) {
        double ext = norm(state.positions[s.b] - state.positions[s.a]) - s.rest;
        e += 0.5 * stiffness(s.cls) * ext * ext;
    }
    return e;
}

namespace {

constexpr int kFloorRefreshInterval = 8; // micro-steps between layer-floor rebuilds

struct Scratch {
    std::vector<double> mass;
    std::vector<double> inv_mass;
    std::vector<Vec3> force;
    std::vector<double> floor_z;
    std::vector<std::pair<std::int64_t, int>> cells; // (cell key, particle), sorted
    int substep_counter = 0;

    void init(const ClothState& state, const GarmentTemplate& tmpl, const SimParams& params) {
        mass = particle_masses(tmpl, params);
        inv_mass.resize(mass.size());
        for (size_t i = 0; i < mass.size(); ++i) inv_mass[i] = 1.0 / mass[i];
        force.assign(mass.size(), Vec3{});
        floor_z.assign(mass.size(), params.table_height);
        cells.resize(mass.size());
        substep_counter = 0;
    }
};

std::int64_t cell_key(int cx, int cy) {
    return (static_cast<std::int64_t>(cx) << 32) ^ (static_cast<std::int64_t>(cy) & 0xffffffffLL);
}

void rebuild_layer_floors(const ClothState& state, const GarmentTemplate& tmpl,
                          const SimParams& params, Scratch& scratch) {
    const double cell = tmpl.spacing;
    const double support_r2 = 0.75 * tmpl.spacing * 0.75 * tmpl.spacing;
    const double t = params.cloth_thickness;
    const int n = state.particle_count();

    for (int i = 0; i < n; ++i) {
        const Vec3& p = state.positions[i];
        int cx = static_cast<int>(std::floor(p.x / cell));
        int cy = static_cast<int>(std::floor(p.y / cell));
        scratch.cells[i] = {cell_key(cx, cy), i};
    }
    std::sort(scratch.cells.begin(), scratch.cells.end());

    for (int i = 0; i < n; ++i) {
        const Vec3& p = state.positions[i];
        double floor = params.table_height;
        int cx = static_cast<int>(std::floor(p.x / cell));
        int cy = static_cast<int>(std::floor(p.y / cell));
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                std::int64_t key = cell_key(cx + dx, cy + dy);
                auto lo = std::lower_bound(scratch.cells.begin(), scratch.cells.end(),
                                           std::make_pair(key, -1));
                for (auto it = lo; it != scratch.cells.end() && it->first == key; ++it) {
                    int j = it->second;
                    if (j == i) continue;
                    const Vec3& q = state.positions[j];
                    double dxw = p.x - q.x, dyw = p.y - q.y;
                    if (dxw * dxw + dyw * dyw >= support_r2) continue;
                    if (p.z - q.z <= 0.5 * t) continue; // only supports from clearly below
                    if (tmpl.bonded(i, j)) continue;    // mesh neighbors share a layer
                    floor = std::max(floor, q.z + t);
                }
            }
        }
        scratch.floor_z[i] = floor;
    }
}

Vec3 interp_waypoints(const std::vector<Waypoint>& wps, double t) {
    if (t <= wps.front().t) return wps.front().pos;
    if (t >= wps.back().t) return wps.back().pos;
    for (size_t i = 1; i < wps.size(); ++i) {
        if (t <= wps[i].t) {
            double u = (t - wps[i - 1].t) / (wps[i].t - wps[i - 1].t);
            return wps[i - 1].pos + u * (wps[i].pos - wps[i - 1].pos);
        }
    }
    return wps.back().pos;
}

// One control tick. Trajectory targets, when present, are sampled on the
// micro-step grid with t_base the tick start time.
void advance_tick(ClothState& state, const GarmentTemplate& tmpl, const SimParams& params,
                  Scratch& scratch, const GripperTrajectory* traj = nullptr,
                  double t_base = 0.0) {
    const double h = params.micro_dt();
    const int n = state.particle_count();
    const double damp_factor = std::max(0.0, 1.0 - h * params.damping);

    for (int sub = 0; sub < params.substeps; ++sub) {
        if (params.layer_contact && scratch.substep_counter % kFloorRefreshInterval == 0)
            rebuild_layer_floors(state, tmpl, params, scratch);
        ++scratch.substep_counter;

        for (auto& f : scratch.force) f = Vec3{};
        for (const auto& s : tmpl.springs) {
            Vec3 d = state.positions[s.b] - state.positions[s.a];
            double len = norm(d);
            if (len < 1e-12) continue;
            Vec3 dir = d * (1.0 / len);
            double k = s.cls == SpringClass::Structural ? params.k_structural
                       : s.cls == SpringClass::Shear    ? params.k_shear
                                                        : params.k_bend;
            double fs = k * (len - s.rest);
            double fd = params.spring_damping *
                        dot(state.velocities[s.b] - state.velocities[s.a], dir);
            Vec3 f = dir * (fs + fd);
            scratch.force[s.a] += f;
            scratch.force[s.b] -= f;
        }

        const double t_now = t_base + (sub + 1) * h;
        for (int i = 0; i < n; ++i) {
            Vec3 v = state.velocities[i];
            v += h * (scratch.force[i] * scratch.inv_mass[i]);
            v.z -= h * params.gravity;
            v *= damp_factor;
            Vec3 x = state.positions[i] + h * v;

            double floor = params.layer_contact ? std::max(scratch.floor_z[i], params.table_height)
                                                : params.table_height;
            if (x.z < floor) {
                x.z = floor;
                double vn = v.z < 0.0 ? -v.z : 0.0;
                if (v.z < 0.0) v.z = 0.0;
                double vt = std::hypot(v.x, v.y);
                if (vt > 0.0) {
                    double dvt = params.friction * (vn + params.gravity * h);
                    double scale = vt <= dvt ? 0.0 : (vt - dvt) / vt;
                    v.x *= scale;
                    v.y *= scale;
                }
            }
            state.velocities[i] = v;
            state.positions[i] = x;
        }

        for (auto& a : state.attachments) {
            Vec3 target = a.target;
            if (traj) {
                const auto& wps = a.gripper == GripperId::Left ? traj->left : traj->right;
                if (!wps.empty()) {
                    target = interp_waypoints(wps, t_now);
                    Vec3 prev = interp_waypoints(wps, t_now - h);
                    state.velocities[a.particle] = (target - prev) * (1.0 / h);
                    a.target = target;
                } else {
                    state.velocities[a.particle] = Vec3{};
                }
            } else {
                state.velocities[a.particle] = Vec3{};
            }
            state.positions[a.particle] = target;
        }
    }

    double check = 0.0;
    for (const auto& p : state.positions) check += p.x + p.y + p.z;
    if (!std::isfinite(check)) throw SimulationDiverged{};
}

} // namespace

ClothState step(const ClothState& state, const GarmentTemplate& tmpl, const SimParams& params) {
    params.validate();
    ClothState out = state;
    Scratch scratch;
    scratch.init(out, tmpl, params);
    advance_tick(out, tmpl, params, scratch);
    return out;
}

ClothState settle(const ClothState& state, const GarmentTemplate& tmpl, const SimParams& params,
                  int* steps_taken) {
    params.validate();
    ClothState out = state;
    Scratch scratch;
    scratch.init(out, tmpl, params);
    int steps = 0;
    while (steps < params.max_settle_steps) {
        if (kinetic_energy(out, tmpl, params) < params.settle_ke_threshold) break;
        advance_tick(out, tmpl, params, scratch);
        ++steps;
    }
    if (steps_taken) *steps_taken = steps;
    return out;
}

ClothState attach(const ClothState& state, GripperId gripper, int particle) {
    if (particle < 0 || particle >= state.particle_count())
        throw std::invalid_argument("attach: particle index out of range");
    if (state.find_attachment(gripper)) throw GripperBusy(to_string(gripper));
    ClothState out = state;
    out.velocities[particle] = Vec3{};
    out.attachments.push_back({gripper, particle, out.positions[particle]});
    return out;
}

ClothState detach(const ClothState& state, GripperId gripper) {
    ClothState out = state;
    std::erase_if(out.attachments, [&](const Attachment& a) { return a.gripper == gripper; });
    return out;
}

double GripperTrajectory::duration() const {
    double d = 0.0;
    if (!left.empty()) d = std::max(d, left.back().t);
    if (!right.empty()) d = std::max(d, right.back().t);
    return d;
}

ClothState move_grippers(const ClothState& state, const GarmentTemplate& tmpl,
                         const SimParams& params, const GripperTrajectory& traj) {
    params.validate();
    auto check_increasing = [](const std::vector<Waypoint>& wps) {
        for (size_t i = 1; i < wps.size(); ++i)
            if (!(wps[i].t > wps[i - 1].t))
                throw std::invalid_argument("trajectory timestamps must be strictly increasing");
    };
    check_increasing(traj.left);
    check_increasing(traj.right);

    ClothState out = state;
    double duration = traj.duration();
    if (duration <= 0.0) return out;

    Scratch scratch;
    scratch.init(out, tmpl, params);
    int ticks = static_cast<int>(std::ceil(duration / params.dt - 1e-9));
    for (int k = 0; k < ticks; ++k)
        advance_tick(out, tmpl, params, scratch, &traj, k * params.dt);
    return out;
}

} // namespace clothbench
