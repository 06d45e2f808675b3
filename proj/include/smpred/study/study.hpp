#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "smpred/analysis/evaluate.hpp"
#include "smpred/explore/generate.hpp"
#include "smpred/model/trainer.hpp"
#include "smpred/study/config.hpp"

namespace smpred {

struct TrialOutcome {
  ExplorationKind exploration = ExplorationKind::kMmt;
  int trial_index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;  // set when !ok

  LearningCurve curve;
  std::int64_t final_epoch = 0;
  bool early_stopped = false;
  double final_loss = 0.0;
  double final_q_p = 0.0;
  double final_q_h = 0.0;
  std::optional<double> redundancy;  // unset when not applicable
  GenerateStats gen_stats;
  nlohmann::json clouds;  // final point-cloud export (plot input)
};

struct RegimeAggregate {
  ExplorationKind exploration = ExplorationKind::kMmt;
  std::vector<std::int64_t> epochs;
  std::vector<double> loss_mean, loss_std;
  std::vector<double> q_p_mean, q_p_std;
  std::vector<double> q_h_mean, q_h_std;
};

struct StudyResult {
  ExperimentConfig config;
  std::vector<TrialOutcome> outcomes;      // regime-major, trial-minor order
  std::vector<RegimeAggregate> aggregates; // one per regime, successes only

  std::vector<const TrialOutcome*> regime_outcomes(ExplorationKind kind) const;
  // Median over successful trials of the final value; throws when none.
  double median_final_q_p(ExplorationKind kind) const;
  double median_final_loss(ExplorationKind kind) const;
};

// Runs one trial end to end: scene + data generation, normalization,
// training with snapshots, final evaluation. When `trial_dir` is non-empty,
// writes scene.json, curve.csv, checkpoint.bin, clouds.json and a manifest.
TrialOutcome run_trial(const ExperimentConfig& config, ExplorationKind exploration,
                       int trial_index, const std::filesystem::path& trial_dir);

// Runs trials x explorations (concurrently up to `jobs`), writes per-regime
// aggregate CSVs, overlay SVG plots, point-cloud figures, a study manifest
// and a summary report under out_dir. Throws only when every trial failed.
StudyResult run_study(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                      int jobs = 0);

nlohmann::json study_report_json(const StudyResult& result);

// Recomputes Q_p / Q_h on the regular grid from a checkpoint's provenance and
// verifies the values match the final curve row within 1e-12. When
// `expected_scene` is given it must equal the provenance scene.
struct EvalOutcome {
  double q_p = 0.0;
  double q_h = 0.0;
  double curve_q_p = 0.0;
  double curve_q_h = 0.0;
  nlohmann::json clouds;
};
EvalOutcome eval_checkpoint(const std::filesystem::path& checkpoint_path,
                            const std::optional<nlohmann::json>& expected_scene = std::nullopt);

// Regenerates the SVG figures of an existing study directory from its CSV /
// JSON artifacts.
void replot_study(const std::filesystem::path& study_dir);

std::string plot_color(ExplorationKind kind);

}  // namespace smpred
