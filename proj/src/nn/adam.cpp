#include "smpred/nn/adam.hpp"

#include <cmath>
#include <string>

#include "smpred/common/error.hpp"

namespace smpred {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size() ||
      params.size() != state.second_moment.size())
    throw ShapeError("adam_step: parameter/gradient/state sizes disagree");
  if (!(lr > 0.0)) throw ConfigError("adam_step: lr must be > 0, got " + std::to_string(lr));

  state.step_count += 1;
  const double b1 = state.beta1;
  const double b2 = state.beta2;
  const double bias1 = 1.0 - std::pow(b1, static_cast<double>(state.step_count));
  const double bias2 = 1.0 - std::pow(b2, static_cast<double>(state.step_count));
  double* m = state.first_moment.data();
  double* v = state.second_moment.data();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    m[i] = b1 * m[i] + (1.0 - b1) * g;
    v[i] = b2 * v[i] + (1.0 - b2) * g * g;
    const double m_hat = m[i] / bias1;
    const double v_hat = v[i] / bias2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
}

double LrSchedule::at(std::int64_t epoch) const {
  if (epoch < 0) throw DomainError("LrSchedule::at: epoch must be >= 0");
  if (epoch >= decay_epochs) return lr_end;
  const double t = static_cast<double>(epoch) / static_cast<double>(decay_epochs);
  return lr_start + (lr_end - lr_start) * t;
}

}  // namespace smpred
