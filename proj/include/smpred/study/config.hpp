#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "smpred/env/types.hpp"
#include "smpred/explore/dataset.hpp"
#include "smpred/model/trainer.hpp"
#include "smpred/nn/activation.hpp"

namespace smpred {

// Everything that defines an experiment semantically. Execution details
// (output directory, job count) stay outside so identical configs hash and
// serialize identically no matter where artifacts land.
struct ExperimentConfig {
  SetupKind setup = SetupKind::kGridWorld;
  std::vector<ExplorationKind> explorations{ExplorationKind::kMmt};
  std::size_t dim_h = 3;
  Activation activation = Activation::kSelu;
  int trials = 10;
  std::size_t n_transitions = 3'000'000;
  std::uint64_t base_seed = 0;
  TrainConfig train;

  // `desk`: minutes-per-trial scale (2e5 transitions, 5e4 epochs, decay over
  // 2.5e4, eval every 100, 5 trials). `paper`: the full-scale settings
  // (3e6 transitions, 2e6 epochs, decay over 1e6, eval every 1000, 10
  // trials); expect overnight runtimes.
  static ExperimentConfig preset(const std::string& name);

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);

  // Override one field by dotted name, e.g. ("train.max_epochs", "5000") or
  // ("explorations", "mm,mmt").
  void apply_override(const std::string& dotted_key, const std::string& value);

  // FNV-1a over the canonical JSON dump; stable across runs and platforms.
  std::uint64_t hash() const;
  std::string hash_hex() const;

  std::uint64_t trial_seed(int trial_index) const {
    return base_seed + static_cast<std::uint64_t>(trial_index);
  }
};

}  // namespace smpred
