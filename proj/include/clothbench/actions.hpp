#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace clothbench {

// Pixel-space grasp pose. phi is the gripper yaw; it is recorded and
// validated but does not change the point-cylinder grasp model.
struct PickPose {
    double x = 0.0; // pixel column
    double y = 0.0; // pixel row
    double phi = 0.0;
};

struct PickPlaceCmd {
    PickPose pick, place;
};

struct PickDragCmd {
    PickPose pick_left, pick_right;
    double drag_distance = 0.0; // meters
};

struct FlingCmd {
    PickPose pick_left, pick_right;
};

struct FoldCmd {
    std::vector<std::pair<PickPose, PickPose>> pairs; // (pick, place), 1 or 2
};

using ActionCommand = std::variant<PickPlaceCmd, PickDragCmd, FlingCmd, FoldCmd>;

std::string primitive_name(const ActionCommand& cmd);

// Two-handed commands must keep the left pick strictly left of the pair
// midpoint. Single-handed commands trivially satisfy this.
bool satisfies_left_of_center(const ActionCommand& cmd);

// Bounds, phi range and the left-of-center constraint. Throws
// std::invalid_argument on violation.
void validate_command(const ActionCommand& cmd, int image_width, int image_height);

// Line-oriented log record (single-line JSON), and its inverse.
std::string command_to_record(const ActionCommand& cmd);
ActionCommand command_from_record(const std::string& record);

} // namespace clothbench
