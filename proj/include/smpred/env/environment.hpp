#pragma once

#include <optional>
#include <variant>
#include <vector>

#include <json.hpp>

#include "smpred/env/armroom.hpp"
#include "smpred/env/gridworld.hpp"
#include "smpred/env/types.hpp"
#include "smpred/nn/rng.hpp"

namespace smpred {

// Uniform facade over the two simulated setups so exploration and analysis
// code stays setup-agnostic. Sensing is a pure function of
// (scene, translation, m); only the translation mutates.
class Environment {
 public:
  static Environment create(SetupKind kind, Rng& rng);

  SetupKind kind() const;
  std::size_t motor_dim() const { return 3; }
  std::size_t sensory_dim() const;

  MotorState sample_motor(Rng& rng) const;
  // Grid-world sensing is total; the arm returns nullopt for tips outside
  // the walls or inside an object.
  std::optional<SensoryState> sense(const MotorState& m) const;
  // Ground-truth egocentric sensor position for a motor state.
  Position position_of(const MotorState& m) const;

  void translate(Rng& rng);
  void reset_translation();
  std::array<double, 2> translation_vec() const;

  // The fixed regular motor sampling for Q_p / Q_h evaluations, valid in the
  // untranslated scene.
  std::vector<MotorGridPoint> regular_motor_grid() const;

  nlohmann::json to_json() const;
  static Environment from_json(const nlohmann::json& j);

  const GridWorld& gridworld() const { return std::get<GridWorld>(impl_); }
  const ArmRoom& armroom() const { return std::get<ArmRoom>(impl_); }

 private:
  explicit Environment(std::variant<GridWorld, ArmRoom> impl) : impl_(std::move(impl)) {}
  std::variant<GridWorld, ArmRoom> impl_;
};

}  // namespace smpred
