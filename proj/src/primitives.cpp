#include "clothbench/primitives.hpp"

#include <algorithm>
#include <cmath>

namespace clothbench {

void PrimitiveParams::to_config(KeyValueConfig& cfg) const {
    cfg.set("prim.grasp_radius", grasp_radius);
    cfg.set("prim.pp_lift_height", pp_lift_height);
    cfg.set("prim.pp_release_height", pp_release_height);
    cfg.set("prim.drag_height", drag_height);
    cfg.set("prim.fling_lift_height", fling_lift_height);
    cfg.set("prim.fling_stretch_ratio", fling_stretch_ratio);
    cfg.set("prim.fling_forward_dist", fling_forward_dist);
    cfg.set("prim.fling_speed", fling_speed);
    cfg.set("prim.fling_retreat_dist", fling_retreat_dist);
    cfg.set("prim.fling_release_height", fling_release_height);
    cfg.set("prim.fling_hang_time", fling_hang_time);
    cfg.set("prim.fold_apex_height", fold_apex_height);
    cfg.set("prim.move_speed", move_speed);
    cfg.set("prim.lift_speed", lift_speed);
    cfg.set("prim.default_drag_distance", default_drag_distance);
    cfg.set("prim.drag_anchor_tolerance", drag_anchor_tolerance);
}

PrimitiveParams PrimitiveParams::from_config(const KeyValueConfig& cfg) {
    PrimitiveParams p;
    p.grasp_radius = cfg.get_double("prim.grasp_radius", p.grasp_radius);
    p.pp_lift_height = cfg.get_double("prim.pp_lift_height", p.pp_lift_height);
    p.pp_release_height = cfg.get_double("prim.pp_release_height", p.pp_release_height);
    p.drag_height = cfg.get_double("prim.drag_height", p.drag_height);
    p.fling_lift_height = cfg.get_double("prim.fling_lift_height", p.fling_lift_height);
    p.fling_stretch_ratio = cfg.get_double("prim.fling_stretch_ratio", p.fling_stretch_ratio);
    p.fling_forward_dist = cfg.get_double("prim.fling_forward_dist", p.fling_forward_dist);
    p.fling_speed = cfg.get_double("prim.fling_speed", p.fling_speed);
    p.fling_retreat_dist = cfg.get_double("prim.fling_retreat_dist", p.fling_retreat_dist);
    p.fling_release_height = cfg.get_double("prim.fling_release_height", p.fling_release_height);
    p.fling_hang_time = cfg.get_double("prim.fling_hang_time", p.fling_hang_time);
    p.fold_apex_height = cfg.get_double("prim.fold_apex_height", p.fold_apex_height);
    p.move_speed = cfg.get_double("prim.move_speed", p.move_speed);
    p.lift_speed = cfg.get_double("prim.lift_speed", p.lift_speed);
    p.default_drag_distance = cfg.get_double("prim.default_drag_distance", p.default_drag_distance);
    p.drag_anchor_tolerance = cfg.get_double("prim.drag_anchor_tolerance", p.drag_anchor_tolerance);
    return p;
}

std::optional<int> find_grasp_particle(const ClothState& state, const Observation& obs,
                                       const PrimitiveParams& prim, const PickPose& pose) {
    Vec2 world = obs.cal.to_world(pose.x, pose.y);
    const double r2 = prim.grasp_radius * prim.grasp_radius;
    int best = -1;
    double best_z = -1e30;
    for (int i = 0; i < state.particle_count(); ++i) {
        const Vec3& p = state.positions[i];
        double dx = p.x - world.x, dy = p.y - world.y;
        if (dx * dx + dy * dy > r2) continue;
        if (p.z > best_z) {
            best_z = p.z;
            best = i;
        }
    }
    if (best < 0) return std::nullopt;
    return best;
}

ClothState grasp_at(const ClothState& state, const Observation& obs, const PrimitiveParams& prim,
                    const PickPose& pose, GripperId gripper, bool* missed) {
    auto particle = find_grasp_particle(state, obs, prim, pose);
    if (!particle) {
        if (missed) *missed = true;
        return state;
    }
    if (missed) *missed = false;
    return attach(state, gripper, *particle);
}

namespace {

constexpr double kMinSegmentTime = 0.05; // s, keeps waypoint timestamps increasing

struct TrajectoryBuilder {
    std::vector<Waypoint> wps;
    double t = 0.0;

    void start(const Vec3& pos) { wps = {{0.0, pos}}; }

    void move_to(const Vec3& pos, double speed) {
        double d = norm(pos - wps.back().pos);
        t += std::max(d / speed, kMinSegmentTime);
        wps.push_back({t, pos});
    }

    void hold(double duration) {
        t += std::max(duration, kMinSegmentTime);
        wps.push_back({t, wps.back().pos});
    }

    // Pads with a final hold so both arms share the same clock.
    void pad_to(double t_end) {
        if (t_end > t + 1e-9) {
            t = t_end;
            wps.push_back({t, wps.back().pos});
        }
    }
};

PrimitiveOutcome aborted(const ClothState& state, const GarmentTemplate& tmpl,
                         const SimParams& sim, std::string detail) {
    return {settle(state, tmpl, sim), true, std::move(detail)};
}

PrimitiveOutcome finish(ClothState state, const GarmentTemplate& tmpl, const SimParams& sim) {
    state = detach(state, GripperId::Left);
    state = detach(state, GripperId::Right);
    return {settle(state, tmpl, sim), false, {}};
}

Vec2 mask_centroid_world(const Observation& obs) {
    auto geom = mask_geometry(obs);
    return obs.cal.to_world(geom.centroid.x, geom.centroid.y);
}

} // namespace

PrimitiveOutcome execute_pick_place(const ClothState& state, const GarmentTemplate& tmpl,
                                    const SimParams& sim, const PrimitiveParams& prim,
                                    const Observation& obs, const PickPlaceCmd& cmd) {
    bool miss = false;
    ClothState st = grasp_at(state, obs, prim, cmd.pick, GripperId::Left, &miss);
    if (miss) return aborted(state, tmpl, sim, "pick_place: grasp miss");

    Vec3 start = st.find_attachment(GripperId::Left)->target;
    Vec2 place_w = obs.cal.to_world(cmd.place.x, cmd.place.y);
    const double table = sim.table_height;

    TrajectoryBuilder arm;
    arm.start(start);
    arm.move_to({start.x, start.y, table + prim.pp_lift_height}, prim.lift_speed);
    arm.move_to({place_w.x, place_w.y, table + prim.pp_lift_height}, prim.move_speed);
    arm.move_to({place_w.x, place_w.y, table + prim.pp_release_height}, prim.lift_speed);

    GripperTrajectory traj;
    traj.left = arm.wps;
    st = move_grippers(st, tmpl, sim, traj);
    return finish(std::move(st), tmpl, sim);
}

PrimitiveOutcome execute_drag(const ClothState& state, const GarmentTemplate& tmpl,
                              const SimParams& sim, const PrimitiveParams& prim,
                              const Observation& obs, const PickDragCmd& cmd) {
    Vec2 centroid = mask_centroid_world(obs);
    Vec2 left_w = obs.cal.to_world(cmd.pick_left.x, cmd.pick_left.y);
    Vec2 right_w = obs.cal.to_world(cmd.pick_right.x, cmd.pick_right.y);
    double dl = norm(left_w - centroid), dr = norm(right_w - centroid);
    bool anchor_is_left = dl <= dr;
    if (std::min(dl, dr) > prim.drag_anchor_tolerance)
        throw std::invalid_argument("pick_drag: neither pick is near the mask centroid");

    bool miss_l = false, miss_r = false;
    ClothState st = grasp_at(state, obs, prim, cmd.pick_left, GripperId::Left, &miss_l);
    if (!miss_l) st = grasp_at(st, obs, prim, cmd.pick_right, GripperId::Right, &miss_r);
    if (miss_l || miss_r)
        return aborted(state, tmpl, sim,
                       std::string("pick_drag: grasp miss on ") + (miss_l ? "left" : "right"));

    const double table = sim.table_height;
    Vec3 l0 = st.find_attachment(GripperId::Left)->target;
    Vec3 r0 = st.find_attachment(GripperId::Right)->target;
    Vec2 mover_w = anchor_is_left ? right_w : left_w;
    Vec2 dir = normalized(mover_w - centroid);
    if (dir.x == 0.0 && dir.y == 0.0) dir = {1.0, 0.0};
    Vec2 mover_end = mover_w + cmd.drag_distance * dir;

    TrajectoryBuilder anchor_arm, mover_arm;
    Vec3 anchor0 = anchor_is_left ? l0 : r0;
    Vec3 mover0 = anchor_is_left ? r0 : l0;
    anchor_arm.start(anchor0);
    anchor_arm.move_to({anchor0.x, anchor0.y, table + prim.drag_height}, prim.lift_speed);
    mover_arm.start(mover0);
    mover_arm.move_to({mover0.x, mover0.y, table + prim.drag_height}, prim.lift_speed);
    mover_arm.move_to({mover_end.x, mover_end.y, table + prim.drag_height}, prim.move_speed);
    double t_end = std::max(anchor_arm.t, mover_arm.t);
    anchor_arm.pad_to(t_end);
    mover_arm.pad_to(t_end);

    GripperTrajectory traj;
    traj.left = anchor_is_left ? anchor_arm.wps : mover_arm.wps;
    traj.right = anchor_is_left ? mover_arm.wps : anchor_arm.wps;
    st = move_grippers(st, tmpl, sim, traj);
    return finish(std::move(st), tmpl, sim);
}

PrimitiveOutcome execute_fling(const ClothState& state, const GarmentTemplate& tmpl,
                               const SimParams& sim, const PrimitiveParams& prim,
                               const Observation& obs, const FlingCmd& cmd) {
    auto left_particle = find_grasp_particle(state, obs, prim, cmd.pick_left);
    auto right_particle = find_grasp_particle(state, obs, prim, cmd.pick_right);
    if (!left_particle || !right_particle)
        return aborted(state, tmpl, sim,
                       std::string("fling: grasp miss on ") + (!left_particle ? "left" : "right"));

    ClothState st = attach(state, GripperId::Left, *left_particle);
    st = attach(st, GripperId::Right, *right_particle);

    const double table = sim.table_height;
    const double lift_z = table + prim.fling_lift_height;
    Vec3 l0 = st.find_attachment(GripperId::Left)->target;
    Vec3 r0 = st.find_attachment(GripperId::Right)->target;

    // Stretch check: separation target from the grasped pair's rest-pose
    // surface distance.
    double geodesic = tmpl.geodesic_distance(*left_particle, *right_particle);
    double sep_target = std::min(prim.fling_stretch_ratio * geodesic, 0.9);

    Vec2 mid{0.5 * (l0.x + r0.x), 0.5 * (l0.y + r0.y)};
    Vec2 axis = normalized(Vec2{r0.x - l0.x, r0.y - l0.y});
    if (axis.x == 0.0 && axis.y == 0.0) axis = {1.0, 0.0};
    Vec2 l_spread = mid - 0.5 * sep_target * axis;
    Vec2 r_spread = mid + 0.5 * sep_target * axis;

    // Fling direction: horizontal, perpendicular to the pair axis, toward the
    // workspace center so the cloth stays in view.
    Vec2 fwd{-axis.y, axis.x};
    Vec2 to_center = Vec2{obs.cal.origin_x + 0.5 * obs.width * obs.cal.meters_per_pixel,
                          obs.cal.origin_y + 0.5 * obs.height * obs.cal.meters_per_pixel} -
                     mid;
    if (dot(fwd, to_center) < 0.0) fwd = {-fwd.x, -fwd.y};

    auto build_arm = [&](const Vec3& start, const Vec2& spread) {
        TrajectoryBuilder arm;
        arm.start(start);
        arm.move_to({start.x, start.y, lift_z}, prim.lift_speed);
        arm.hold(prim.fling_hang_time);
        arm.move_to({spread.x, spread.y, lift_z}, prim.move_speed);
        Vec2 out = spread + prim.fling_forward_dist * fwd;
        arm.move_to({out.x, out.y, lift_z}, prim.fling_speed);
        Vec2 back = out - prim.fling_retreat_dist * fwd;
        arm.move_to({back.x, back.y, table + prim.fling_release_height}, prim.fling_speed);
        return arm;
    };
    TrajectoryBuilder left_arm = build_arm(l0, l_spread);
    TrajectoryBuilder right_arm = build_arm(r0, r_spread);
    double t_end = std::max(left_arm.t, right_arm.t);
    left_arm.pad_to(t_end);
    right_arm.pad_to(t_end);

    GripperTrajectory traj{left_arm.wps, right_arm.wps};
    st = move_grippers(st, tmpl, sim, traj);
    return finish(std::move(st), tmpl, sim);
}

PrimitiveOutcome execute_fold(const ClothState& state, const GarmentTemplate& tmpl,
                              const SimParams& sim, const PrimitiveParams& prim,
                              const Observation& obs, const FoldCmd& cmd) {
    if (cmd.pairs.empty() || cmd.pairs.size() > 2)
        throw std::invalid_argument("fold: needs 1 or 2 pick/place pairs");

    std::vector<int> particles;
    for (const auto& [pick, place] : cmd.pairs) {
        auto p = find_grasp_particle(state, obs, prim, pick);
        if (!p) return aborted(state, tmpl, sim, "fold: grasp miss");
        particles.push_back(*p);
    }

    ClothState st = attach(state, GripperId::Left, particles[0]);
    if (particles.size() == 2) st = attach(st, GripperId::Right, particles[1]);

    const double table = sim.table_height;
    auto build_arm = [&](GripperId g, const PickPose& place) {
        TrajectoryBuilder arm;
        Vec3 start = st.find_attachment(g)->target;
        Vec2 place_w = obs.cal.to_world(place.x, place.y);
        arm.start(start);
        arm.move_to({start.x, start.y, table + prim.fold_apex_height}, prim.lift_speed);
        arm.move_to({place_w.x, place_w.y, table + prim.fold_apex_height}, prim.move_speed);
        arm.move_to({place_w.x, place_w.y, table + prim.pp_release_height}, prim.lift_speed);
        return arm;
    };

    TrajectoryBuilder left_arm = build_arm(GripperId::Left, cmd.pairs[0].second);
    GripperTrajectory traj;
    if (particles.size() == 2) {
        TrajectoryBuilder right_arm = build_arm(GripperId::Right, cmd.pairs[1].second);
        double t_end = std::max(left_arm.t, right_arm.t);
        left_arm.pad_to(t_end);
        right_arm.pad_to(t_end);
        traj.right = right_arm.wps;
    }
    traj.left = left_arm.wps;
    st = move_grippers(st, tmpl, sim, traj);
    return finish(std::move(st), tmpl, sim);
}

PrimitiveOutcome execute_command(const ClothState& state, const GarmentTemplate& tmpl,
                                 const SimParams& sim, const PrimitiveParams& prim,
                                 const Observation& obs, const ActionCommand& cmd) {
    validate_command(cmd, obs.width, obs.height);
    if (const auto* pp = std::get_if<PickPlaceCmd>(&cmd))
        return execute_pick_place(state, tmpl, sim, prim, obs, *pp);
    if (const auto* drag = std::get_if<PickDragCmd>(&cmd))
        return execute_drag(state, tmpl, sim, prim, obs, *drag);
    if (const auto* fling = std::get_if<FlingCmd>(&cmd))
        return execute_fling(state, tmpl, sim, prim, obs, *fling);
    return execute_fold(state, tmpl, sim, prim, obs, std::get<FoldCmd>(cmd));
}

} // namespace clothbench
