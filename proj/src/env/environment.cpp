#include "smpred/env/environment.hpp"

#include "smpred/common/error.hpp"

namespace smpred {

std::string to_string(SetupKind kind) {
  switch (kind) {
    case SetupKind::kGridWorld:
      return "grid_world";
    case SetupKind::kArmDistance:
      return "arm_distance";
    case SetupKind::kArmRgb:
      return "arm_rgb";
  }
  throw ConfigError("unknown setup kind");
}

SetupKind setup_from_string(const std::string& name) {
  if (name == "grid_world") return SetupKind::kGridWorld;
  if (name == "arm_distance") return SetupKind::kArmDistance;
  if (name == "arm_rgb") return SetupKind::kArmRgb;
  throw ConfigError("unknown setup kind: " + name);
}

Environment Environment::create(SetupKind kind, Rng& rng) {
  switch (kind) {
    case SetupKind::kGridWorld:
      return Environment(GridWorld::random(rng));
    case SetupKind::kArmDistance:
      return Environment(ArmRoom::random(rng, SensorKind::kDistanceRing));
    case SetupKind::kArmRgb:
      return Environment(ArmRoom::random(rng, SensorKind::kRgbPanorama));
  }
  throw ConfigError("unknown setup kind");
}

SetupKind Environment::kind() const {
  if (std::holds_alternative<GridWorld>(impl_)) return SetupKind::kGridWorld;
  const ArmRoom& room = std::get<ArmRoom>(impl_);
  return room.sensor().kind == SensorKind::kDistanceRing ? SetupKind::kArmDistance
                                                         : SetupKind::kArmRgb;
}

std::size_t Environment::sensory_dim() const {
  if (std::holds_alternative<GridWorld>(impl_)) return GridWorld::kSensoryDim;
  return std::get<ArmRoom>(impl_).sensor().sensory_dim();
}

MotorState Environment::sample_motor(Rng& rng) const {
  return std::visit([&rng](const auto& env) { return env.sample_motor(rng); }, impl_);
}

std::optional<SensoryState> Environment::sense(const MotorState& m) const {
  if (const GridWorld* world = std::get_if<GridWorld>(&impl_)) return world->sense(m);
  return std::get<ArmRoom>(impl_).sense(m);
}

Position Environment::position_of(const MotorState& m) const {
  if (std::holds_alternative<GridWorld>(impl_)) return GridWorld::position_of(m);
  return ArmRoom::arm_tip(m);
}

void Environment::translate(Rng& rng) {
  std::visit([&rng](auto& env) { env.translate(rng); }, impl_);
}

void Environment::reset_translation() {
  std::visit([](auto& env) { env.reset_translation(); }, impl_);
}

std::array<double, 2> Environment::translation_vec() const {
  if (const GridWorld* world = std::get_if<GridWorld>(&impl_)) {
    const auto t = world->translation();
    return {static_cast<double>(t[0]), static_cast<double>(t[1])};
  }
  const Vec2 t = std::get<ArmRoom>(impl_).translation();
  return {t.x, t.y};
}

std::vector<MotorGridPoint> Environment::regular_motor_grid() const {
  if (std::holds_alternative<GridWorld>(impl_)) return regular_motor_grid_gridworld();
  return regular_motor_grid_arm(std::get<ArmRoom>(impl_));
}

nlohmann::json Environment::to_json() const {
  return std::visit([](const auto& env) { return env.to_json(); }, impl_);
}

Environment Environment::from_json(const nlohmann::json& j) {
  const std::string kind = j.value("kind", "");
  if (kind == "grid_world") return Environment(GridWorld::from_json(j));
  if (kind == "arm_distance" || kind == "arm_rgb") return Environment(ArmRoom::from_json(j));
  throw IoError("unknown scene kind: " + kind);
}

}  // namespace smpred
