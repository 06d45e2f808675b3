#include "smpred/model/predictive_model.hpp"

#include <array>
#include <cmath>
#include <string>

#include "smpred/common/error.hpp"

namespace smpred {

PredictiveModel PredictiveModel::create(const ModelConfig& config, Rng& rng) {
  if (config.motor_dim < 1 || config.sensory_dim < 1 || config.dim_h < 1)
    throw ConfigError("PredictiveModel: dims must be >= 1");
  std::vector<std::size_t> enc_sizes{config.motor_dim};
  enc_sizes.insert(enc_sizes.end(), std::begin(kEncoderHidden), std::end(kEncoderHidden));
  enc_sizes.push_back(config.dim_h);
  std::vector<std::size_t> pred_sizes{2 * config.dim_h + config.sensory_dim};
  pred_sizes.insert(pred_sizes.end(), std::begin(kPredictorHidden), std::end(kPredictorHidden));
  pred_sizes.push_back(config.sensory_dim);

  Mlp encoder = Mlp::create(enc_sizes, config.hidden_activation, rng);
  Mlp predictor = Mlp::create(pred_sizes, config.hidden_activation, rng);
  return PredictiveModel(config, std::move(encoder), std::move(predictor));
}

PredictiveModel::PredictiveModel(ModelConfig config, Mlp encoder, Mlp predictor)
    : config_(config), encoder_(std::move(encoder)), predictor_(std::move(predictor)) {
  if (encoder_.in_dim() != config_.motor_dim || encoder_.out_dim() != config_.dim_h)
    throw ConfigError("PredictiveModel: encoder dims do not match config");
  if (predictor_.in_dim() != 2 * config_.dim_h + config_.sensory_dim ||
      predictor_.out_dim() != config_.sensory_dim)
    throw ConfigError("PredictiveModel: predictor dims do not match config");
}

Matrix PredictiveModel::predict(const Matrix& m_t, const Matrix& s_t,
                                const Matrix& m_next) const {
  const Matrix h_t = encoder_.forward(m_t);
  const Matrix h_next = encoder_.forward(m_next);
  const std::array<const Matrix*, 3> blocks{&h_t, &h_next, &s_t};
  return predictor_.forward(hstack(blocks));
}

double PredictiveModel::train_step(const Batch& batch, AdamState& adam, double lr) {
  ForwardCache enc_cache_t, enc_cache_next, pred_cache;
  const Matrix h_t = encoder_.forward(batch.m_t, &enc_cache_t);
  const Matrix h_next = encoder_.forward(batch.m_next, &enc_cache_next);
  const std::array<const Matrix*, 3> blocks{&h_t, &h_next, &batch.s_t};
  const Matrix s_pred = predictor_.forward(hstack(blocks), &pred_cache);

  auto [loss, loss_grad] = mse_loss(s_pred, batch.s_next);
  if (!std::isfinite(loss))
    throw DivergenceError("train_step: non-finite loss");

  MlpGrads pred_grads = predictor_.grads_like();
  const Matrix d_input = predictor_.backward(pred_cache, loss_grad, pred_grads);

  const std::size_t dim_h = config_.dim_h;
  const Matrix d_h_t = slice_cols(d_input, 0, dim_h);
  const Matrix d_h_next = slice_cols(d_input, dim_h, 2 * dim_h);
  // Gradient w.r.t. s_t is discarded: s_t is data, not a parameter.

  // Shared encoder: gradients from both siamese applications accumulate into
  // the same tensors.
  MlpGrads enc_grads = encoder_.grads_like();
  encoder_.backward(enc_cache_t, d_h_t, enc_grads);
  encoder_.backward(enc_cache_next, d_h_next, enc_grads);

  const std::size_t n_enc = encoder_.param_count();
  const std::size_t n_total = param_count();
  flat_params_.resize(n_total);
  flat_grads_.resize(n_total);
  encoder_.flatten_params(std::span(flat_params_).subspan(0, n_enc));
  predictor_.flatten_params(std::span(flat_params_).subspan(n_enc));
  Mlp::flatten_grads(enc_grads, std::span(flat_grads_).subspan(0, n_enc));
  Mlp::flatten_grads(pred_grads, std::span(flat_grads_).subspan(n_enc));

  adam_step(flat_params_, flat_grads_, adam, lr);

  encoder_.unflatten_params(std::span<const double>(flat_params_).subspan(0, n_enc));
  predictor_.unflatten_params(std::span<const double>(flat_params_).subspan(n_enc));
  return loss;
}

void PredictiveModel::flatten_params(std::span<double> out) const {
  const std::size_t n_enc = encoder_.param_count();
  encoder_.flatten_params(out.subspan(0, n_enc));
  predictor_.flatten_params(out.subspan(n_enc));
}

void PredictiveModel::unflatten_params(std::span<const double> in) {
  const std::size_t n_enc = encoder_.param_count();
  encoder_.unflatten_params(in.subspan(0, n_enc));
  predictor_.unflatten_params(in.subspan(n_enc));
}

}  // namespace smpred
