#pragma once

#include <cstddef>

#include "smpred/nn/adam.hpp"
#include "smpred/nn/mlp.hpp"
#include "smpred/nn/rng.hpp"

namespace smpred {

struct ModelConfig {
  std::size_t motor_dim = 3;
  std::size_t sensory_dim = 4;
  std::size_t dim_h = 3;
  Activation hidden_activation = Activation::kSelu;
};

// Normalized minibatch of transitions, rows aligned across the four blocks.
struct Batch {
  Matrix m_t, s_t, m_next, s_next;
};

// Siamese predictive architecture: one shared encoder applied to m_t and
// m_next, and a predictor mapping (h_t, h_next, s_t) to the next sensory
// state. The encoder parameters exist exactly once; both applications go
// through the same storage, and its gradient is the sum of both
// contributions. No loss term touches h directly.
class PredictiveModel {
 public:
  // Encoder N_m -> 150 -> 100 -> 50 -> dim_H, predictor
  // 2*dim_H + N_s -> 200 -> 150 -> 100 -> N_s, hidden layers with the
  // configured activation, linear outputs.
  static PredictiveModel create(const ModelConfig& config, Rng& rng);
  PredictiveModel(ModelConfig config, Mlp encoder, Mlp predictor);

  Matrix encode(const Matrix& motors) const { return encoder_.forward(motors); }
  Matrix predict(const Matrix& m_t, const Matrix& s_t, const Matrix& m_next) const;

  // One forward + backward + Adam update over the whole parameter vector.
  // Returns the minibatch loss. Throws DivergenceError on non-finite loss.
  double train_step(const Batch& batch, AdamState& adam, double lr);

  const Mlp& encoder() const { return encoder_; }
  const Mlp& predictor() const { return predictor_; }
  const ModelConfig& config() const { return config_; }

  std::size_t param_count() const { return encoder_.param_count() + predictor_.param_count(); }
  void flatten_params(std::span<double> out) const;
  void unflatten_params(std::span<const double> in);

 private:
  ModelConfig config_;
  Mlp encoder_;
  Mlp predictor_;

  // Reused step workspace; avoids reallocating every minibatch.
  std::vector<double> flat_params_, flat_grads_;
};

inline constexpr std::size_t kEncoderHidden[] = {150, 100, 50};
inline constexpr std::size_t kPredictorHidden[] = {200, 150, 100};

}  // namespace smpred
