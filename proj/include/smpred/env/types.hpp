#pragma once

#include <array>
#include <string>
#include <vector>

namespace smpred {

// Motor state m: 3 reals in both setups. Position p: 2 reals in the agent's
// egocentric frame (workspace frame for the grid world, arm-base frame for
// the arm room).
using MotorState = std::array<double, 3>;
using Position = std::array<double, 2>;
using SensoryState = std::vector<double>;

enum class SetupKind { kGridWorld, kArmDistance, kArmRgb };

std::string to_string(SetupKind kind);
SetupKind setup_from_string(const std::string& name);

// One fixed point of the regular motor sampling used for every Q_p/Q_h
// evaluation. `group` indexes the ground-truth position so that redundant
// motor states (same p, different m) share a label.
struct MotorGridPoint {
  MotorState m;
  Position p;
  int group;

  bool operator==(const MotorGridPoint&) const = default;
};

}  // namespace smpred
