#include "clothbench/actions.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace clothbench {

using nlohmann::json;

std::string primitive_name(const ActionCommand& cmd) {
    struct Visitor {
        std::string operator()(const PickPlaceCmd&) const { return "pick_place"; }
        std::string operator()(const PickDragCmd&) const { return "pick_drag"; }
        std::string operator()(const FlingCmd&) const { return "fling"; }
        std::string operator()(const FoldCmd&) const { return "fold"; }
    };
    return std::visit(Visitor{}, cmd);
}

namespace {

bool left_of_center(const PickPose& l, const PickPose& r) {
    return l.x < 0.5 * (l.x + r.x);
}

} // namespace

bool satisfies_left_of_center(const ActionCommand& cmd) {
    if (const auto* drag = std::get_if<PickDragCmd>(&cmd))
        return left_of_center(drag->pick_left, drag->pick_right);
    if (const auto* fling = std::get_if<FlingCmd>(&cmd))
        return left_of_center(fling->pick_left, fling->pick_right);
    return true;
}

void validate_command(const ActionCommand& cmd, int image_width, int image_height) {
    auto check_pose = [&](const PickPose& p, const char* what) {
        if (p.x < 0.0 || p.y < 0.0 || p.x > image_width - 1 || p.y > image_height - 1)
            throw std::invalid_argument(std::string(what) + ": pose outside image bounds");
        if (!(p.phi >= -M_PI && p.phi <= M_PI))
            throw std::invalid_argument(std::string(what) + ": phi outside [-pi, pi]");
    };
    if (const auto* pp = std::get_if<PickPlaceCmd>(&cmd)) {
        check_pose(pp->pick, "pick_place.pick");
        check_pose(pp->place, "pick_place.place");
    } else if (const auto* drag = std::get_if<PickDragCmd>(&cmd)) {
        check_pose(drag->pick_left, "pick_drag.pick_left");
        check_pose(drag->pick_right, "pick_drag.pick_right");
        if (drag->drag_distance < 0.0)
            throw std::invalid_argument("pick_drag: negative drag distance");
    } else if (const auto* fling = std::get_if<FlingCmd>(&cmd)) {
        check_pose(fling->pick_left, "fling.pick_left");
        check_pose(fling->pick_right, "fling.pick_right");
    } else if (const auto* fold = std::get_if<FoldCmd>(&cmd)) {
        if (fold->pairs.empty() || fold->pairs.size() > 2)
            throw std::invalid_argument("fold: needs 1 or 2 pick/place pairs");
        for (const auto& [pick, place] : fold->pairs) {
            check_pose(pick, "fold.pick");
            check_pose(place, "fold.place");
        }
    }
    if (!satisfies_left_of_center(cmd))
        throw std::invalid_argument(primitive_name(cmd) +
                                    ": left pick must be left of the pair midpoint");
}

namespace {

json pose_to_json(const PickPose& p) { return json{{"x", p.x}, {"y", p.y}, {"phi", p.phi}}; }

PickPose pose_from_json(const json& j) {
    return {j.at("x").get<double>(), j.at("y").get<double>(), j.at("phi").get<double>()};
}

} // namespace

std::string command_to_record(const ActionCommand& cmd) {
    json j;
    j["primitive"] = primitive_name(cmd);
    if (const auto* pp = std::get_if<PickPlaceCmd>(&cmd)) {
        j["pick"] = pose_to_json(pp->pick);
        j["place"] = pose_to_json(pp->place);
    } else if (const auto* drag = std::get_if<PickDragCmd>(&cmd)) {
        j["pick_left"] = pose_to_json(drag->pick_left);
        j["pick_right"] = pose_to_json(drag->pick_right);
        j["drag_distance"] = drag->drag_distance;
    } else if (const auto* fling = std::get_if<FlingCmd>(&cmd)) {
        j["pick_left"] = pose_to_json(fling->pick_left);
        j["pick_right"] = pose_to_json(fling->pick_right);
    } else if (const auto* fold = std::get_if<FoldCmd>(&cmd)) {
        json pairs = json::array();
        for (const auto& [pick, place] : fold->pairs)
            pairs.push_back(json{{"pick", pose_to_json(pick)}, {"place", pose_to_json(place)}});
        j["pairs"] = pairs;
    }
    return j.dump();
}

ActionCommand command_from_record(const std::string& record) {
    json j = json::parse(record);
    const std::string name = j.at("primitive").get<std::string>();
    if (name == "pick_place")
        return PickPlaceCmd{pose_from_json(j.at("pick")), pose_from_json(j.at("place"))};
    if (name == "pick_drag")
        return PickDragCmd{pose_from_json(j.at("pick_left")), pose_from_json(j.at("pick_right")),
                           j.at("drag_distance").get<double>()};
    if (name == "fling")
        return FlingCmd{pose_from_json(j.at("pick_left")), pose_from_json(j.at("pick_right"))};
    if (name == "fold") {
        FoldCmd cmd;
        for (const auto& pair : j.at("pairs"))
            cmd.pairs.push_back({pose_from_json(pair.at("pick")), pose_from_json(pair.at("place"))});
        return cmd;
    }
    throw std::invalid_argument("unknown primitive in record: " + name);
}

} // namespace clothbench
