#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "smpred/nn/activation.hpp"
#include "smpred/nn/matrix.hpp"
#include "smpred/nn/rng.hpp"

namespace smpred {

struct DenseLayer {
  Matrix weights;              // in_dim x out_dim
  std::vector<double> biases;  // out_dim
  Activation activation = Activation::kLinear;

  std::size_t in_dim() const { return weights.rows(); }
  std::size_t out_dim() const { return weights.cols(); }
};

// Everything needed to run an exact backward pass for one forward call.
struct ForwardCache {
  std::vector<Matrix> layer_inputs;     // input to each layer
  std::vector<Matrix> pre_activations;  // X*W + b per layer
};

// Per-layer parameter gradients, shapes mirroring the parameters.
struct MlpGrads {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
};

// Plain dense feed-forward network. Hidden layers share one activation kind,
// the output layer is linear.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<DenseLayer> layers);

  // Weights drawn from N(0, 1/sqrt(in_dim)) (LeCun init, the standard
  // companion of SELU), biases zero.
  static Mlp create(std::span<const std::size_t> layer_sizes, Activation hidden_activation,
                    Rng& rng);

  std::size_t layer_count() const { return layers_.size(); }
  std::size_t in_dim() const { return layers_.front().in_dim(); }
  std::size_t out_dim() const { return layers_.back().out_dim(); }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }

  // Output batch has the same row count as the input. When `cache` is given it
  // is filled for a later backward() on the same input.
  Matrix forward(const Matrix& input, ForwardCache* cache = nullptr) const;

  // Accumulates parameter gradients into `grads` (must be zero-initialised by
  // grads_like() or a previous sibling call) and returns the gradient with
  // respect to the forward input, enabling chaining through upstream modules.
  Matrix backward(const ForwardCache& cache, const Matrix& output_grad, MlpGrads& grads) const;

  MlpGrads grads_like() const;

  std::size_t param_count() const;
  void flatten_params(std::span<double> out) const;
  void unflatten_params(std::span<const double> in);
  static void flatten_grads(const MlpGrads& grads, std::span<double> out);

 private:
  std::vector<DenseLayer> layers_;
};

// loss = (1/K) sum_k |pred_row_k - truth_row_k|^2 (squared Euclidean norm per
// row, averaged over the K rows). `grad` is d loss / d pred.
struct MseResult {
  double loss;
  Matrix grad;
};
MseResult mse_loss(const Matrix& pred, const Matrix& truth);

}  // namespace smpred
