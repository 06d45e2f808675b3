// Slow acceptance run: the RGB camera / dim_H = 25 variant at desk scale.
// One MMT trial end to end with N_s = 48; final Q_p must stay under 0.1,
// confirming insensitivity to the representational dimension.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "smpred/study/study.hpp"

using namespace smpred;
namespace fs = std::filesystem;

int main(int argc, char** argv) {
  fs::path out_dir = fs::temp_directory_path() / "smpred_acceptance_rgb";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--out" && i + 1 < argc) {
      out_dir = argv[++i];
    } else {
      std::cerr << "usage: acceptance_rgb [--out DIR]\n";
      return 2;
    }
  }
  fs::create_directories(out_dir);

  ExperimentConfig config = ExperimentConfig::preset("desk");
  config.setup = SetupKind::kArmRgb;
  config.dim_h = 25;
  config.explorations = {ExplorationKind::kMmt};
  config.trials = 1;
  config.base_seed = 2000;

  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  try {
    const StudyResult result = run_study(config, out_dir, 1);
    const TrialOutcome& trial = result.outcomes.front();
    if (!trial.ok) {
      detail = "trial failed: " + trial.error;
    } else {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "final q_p %.4g, final loss %.4g", trial.final_q_p,
                    trial.final_loss);
      if (trial.final_q_p < 0.1) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[PASS] criterion 10: RGB/dim_H=25 desk-scale MMT — %s (%.0fs)\n", buf,
                    secs);
        return 0;
      }
      detail = std::string(buf) + " (needs q_p < 0.1)";
    }
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[FAIL] criterion 10: RGB/dim_H=25 desk-scale MMT — %s (%.0fs)\n",
              detail.c_str(), secs);
  return 1;
}
