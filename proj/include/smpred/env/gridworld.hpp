#pragma once

#include <array>
#include <cstdint>

#include <json.hpp>

#include "smpred/env/types.hpp"
#include "smpred/nn/rng.hpp"

namespace smpred {

// 10x10 torus grid world. Each of the 4 sensory dimensions is an order-3
// bivariate polynomial of the absolute cell, evaluated on coordinates
// normalized to [0,1] (cell / 9). The agent reaches the 5x5 workspace through
// m = (x^2, y^2, m3) with the superfluous command m3 in [0,1]; the
// environment translates by integer offsets, wrapping on both axes.
class GridWorld {
 public:
  static constexpr int kSize = 10;       // environment cells per side
  static constexpr int kWorkspace = 5;   // agent-reachable cells per side
  static constexpr int kSensoryDim = 4;
  static constexpr int kMonomials = 10;  // {1, x, y, x2, xy, y2, x3, x2y, xy2, y3}

  // 40 coefficients drawn uniform in [-1, 1]; translation (0, 0).
  static GridWorld random(Rng& rng);

  // p = (sqrt(m1), sqrt(m2)); m3 ignored. Throws DomainError for negative
  // m1/m2 or when sqrt(m) is not one of the workspace coordinates {0..4}.
  static Position position_of(const MotorState& m);

  // 4 polynomial values at absolute cell (p + translation) mod 10. Total on
  // the torus: any translation and any workspace position are valid.
  SensoryState sense(const MotorState& m) const;

  // Raw field at an absolute cell, wrapped mod 10 (negatives allowed).
  std::array<double, kSensoryDim> field_at(int cell_x, int cell_y) const;
  // Field seen from workspace cell (x, y) under the current translation.
  std::array<double, kSensoryDim> sense_cell(int x, int y) const;

  // Integer offset drawn uniform in {0..9}^2, relative to the initial (zero)
  // translation.
  void translate(Rng& rng);
  void reset_translation() { translation_ = {0, 0}; }
  std::array<int, 2> translation() const { return translation_; }
  void set_translation(int tx, int ty);

  // Workspace cell uniform, m = (x^2, y^2, m3) with m3 uniform in [0, 1].
  MotorState sample_motor(Rng& rng) const;

  const std::array<std::array<double, kMonomials>, kSensoryDim>& coefficients() const {
    return poly_;
  }
  std::uint64_t seed() const { return seed_; }

  nlohmann::json to_json() const;
  static GridWorld from_json(const nlohmann::json& j);

 private:
  GridWorld() = default;

  std::array<std::array<double, kMonomials>, kSensoryDim> poly_{};
  std::array<int, 2> translation_{0, 0};
  std::uint64_t seed_ = 0;
};

// All 25 workspace positions x m3 in {0, 0.5, 1}: 75 motor states over 25
// distinct positions, in a fixed deterministic order.
std::vector<MotorGridPoint> regular_motor_grid_gridworld();

}  // namespace smpred
