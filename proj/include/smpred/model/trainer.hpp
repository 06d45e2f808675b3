#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "smpred/analysis/evaluate.hpp"
#include "smpred/explore/dataset.hpp"
#include "smpred/model/predictive_model.hpp"
#include "smpred/nn/adam.hpp"

namespace smpred {

struct TrainConfig {
  std::int64_t max_epochs = 2'000'000;
  double loss_stop = 1e-8;       // stop when a mini-batch loss falls below
  std::size_t batch_size = 100;
  double lr_start = 1e-3;
  double lr_end = 1e-5;
  std::int64_t decay_epochs = 1'000'000;
  std::int64_t eval_every = 1'000;
  std::uint64_t seed = 0;        // mini-batch draw stream
  double divergence_limit = 1e6;
  bool record_wall_time = false;  // off by default so runs are byte-reproducible

  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

// One snapshot row. `loss` is the mean mini-batch loss over the window since
// the previous snapshot.
struct CurveRow {
  std::int64_t epoch = 0;
  double loss = 0.0;
  double q_p = 0.0;
  double q_h = 0.0;
  double lr = 0.0;
  double wall_time_s = 0.0;
};
using LearningCurve = std::vector<CurveRow>;

void write_curve_csv(const std::filesystem::path& path, const LearningCurve& curve);
LearningCurve read_curve_csv(const std::filesystem::path& path);

struct TrainResult {
  std::int64_t final_epoch = 0;  // epochs actually trained
  bool early_stopped = false;
};

// Owns everything one training run needs to proceed or resume bit-exactly:
// model, Adam state, mini-batch RNG, epoch counter, curve so far. A session
// is strictly sequential; run independent sessions for independent trials.
class TrainSession {
 public:
  TrainSession(PredictiveModel model, TrainConfig config, nlohmann::json provenance);

  // Trains until max_epochs or until a mini-batch loss falls under loss_stop.
  // On early stop the model freezes and the remaining snapshot rows repeat
  // the final values, keeping per-epoch statistics across trials defined.
  // When `checkpoint_path` is non-empty, a resumable checkpoint is written at
  // every snapshot (and at termination).
  TrainResult run(const Dataset& dataset, const EvalGrid& eval_grid,
                  const std::filesystem::path& checkpoint_path = {});

  void save_checkpoint(const std::filesystem::path& path) const;
  static TrainSession load_checkpoint(const std::filesystem::path& path);

  const PredictiveModel& model() const { return model_; }
  const LearningCurve& curve() const { return curve_; }
  const TrainConfig& config() const { return config_; }
  const nlohmann::json& provenance() const { return provenance_; }
  std::int64_t epoch() const { return epoch_; }
  bool early_stopped() const { return early_stopped_; }

 private:
  PredictiveModel model_;
  TrainConfig config_;
  nlohmann::json provenance_;
  AdamState adam_;
  Rng rng_;
  std::int64_t epoch_ = 0;
  bool early_stopped_ = false;
  LearningCurve curve_;
};

}  // namespace smpred
