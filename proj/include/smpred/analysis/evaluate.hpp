#pragma once

#include <vector>

#include <json.hpp>

#include "smpred/analysis/dissimilarity.hpp"
#include "smpred/env/environment.hpp"
#include "smpred/explore/dataset.hpp"
#include "smpred/model/predictive_model.hpp"

namespace smpred {

// The regular motor sampling prepared for evaluation: motor channels passed
// through the training dataset's stored norm, positions kept raw. Built once
// per trial so all snapshots are comparable.
struct EvalGrid {
  Matrix motors_normalized;  // N x N_m
  PointSet positions;        // N x 2, ground truth
  std::vector<int> groups;   // redundancy labels, length N
};

EvalGrid make_eval_grid(const Environment& env, const Normalization& norm);

// Dissimilarity snapshot plus the four clouds (m-sampling, h, projections)
// behind the point-cloud figures.
struct EvalReport {
  DissimilarityReport dis;
  PointSet m;  // normalized regular motor sampling
  PointSet h;  // encoded representation
  PointSet p;  // ground-truth positions
};

EvalReport evaluate(const PredictiveModel& model, const EvalGrid& grid);

// Mean over non-singleton redundancy groups of (group diameter in h-space) /
// (overall h-cloud diameter). 0 when the encoder collapses redundant motor
// states exactly; throws DegenerateError when every group is a singleton.
double redundancy_collapse(const PredictiveModel& model, const EvalGrid& grid);

// Point-cloud export with the affine maps, for plotting and replay.
nlohmann::json cloud_export_json(const EvalReport& report);

}  // namespace smpred
