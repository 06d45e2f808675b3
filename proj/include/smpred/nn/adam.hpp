#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace smpred {

// Adam optimizer state over one flat parameter vector. Hyperparameter
// defaults follow the original Adam paper; the training setup only fixes the
// learning rate schedule.
struct AdamState {
  std::vector<double> first_moment;   // zero-initialised
  std::vector<double> second_moment;  // zero-initialised
  std::int64_t step_count = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  AdamState() = default;
  explicit AdamState(std::size_t param_count)
      : first_moment(param_count, 0.0), second_moment(param_count, 0.0) {}
};

// One bias-corrected Adam update in place. Increments step_count.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr);

// Learning rate linearly interpolated from lr_start at epoch 0 to lr_end at
// epoch decay_epochs, constant lr_end afterwards.
struct LrSchedule {
  double lr_start = 1e-3;
  double lr_end = 1e-5;
  std::int64_t decay_epochs = 1'000'000;

  double at(std::int64_t epoch) const;
};

}  // namespace smpred
