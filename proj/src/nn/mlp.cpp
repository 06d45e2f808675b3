#include "smpred/nn/mlp.hpp"

#include <cmath>
#include <string>

#include "smpred/common/error.hpp"

namespace smpred {

Mlp::Mlp(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ConfigError("Mlp: needs at least one layer");
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i) {
    if (layers_[i].out_dim() != layers_[i + 1].in_dim())
      throw ConfigError("Mlp: layer " + std::to_string(i) + " out dim " +
                        std::to_string(layers_[i].out_dim()) + " != layer " +
                        std::to_string(i + 1) + " in dim " +
                        std::to_string(layers_[i + 1].in_dim()));
  }
}

Mlp Mlp::create(std::span<const std::size_t> layer_sizes, Activation hidden_activation,
                Rng& rng) {
  if (layer_sizes.size() < 2) throw ConfigError("Mlp::create: need at least input and output size");
  for (std::size_t s : layer_sizes)
    if (s < 1) throw ConfigError("Mlp::create: layer sizes must be >= 1");

  std::vector<DenseLayer> layers;
  layers.reserve(layer_sizes.size() - 1);
  for (std::size_t i = 0; i + 1 < layer_sizes.size(); ++i) {
    const std::size_t in = layer_sizes[i];
    const std::size_t out = layer_sizes[i + 1];
    const bool is_output = (i + 2 == layer_sizes.size());
    DenseLayer layer;
    layer.weights = Matrix(in, out);
    const double stddev = 1.0 / std::sqrt(static_cast<double>(in));
    for (double& w : layer.weights.data()) w = rng.normal(0.0, stddev);
    layer.biases.assign(out, 0.0);
    layer.activation = is_output ? Activation::kLinear : hidden_activation;
    layers.push_back(std::move(layer));
  }
  return Mlp(std::move(layers));
}

Matrix Mlp::forward(const Matrix& input, ForwardCache* cache) const {
  if (input.cols() != in_dim())
    throw ShapeError("Mlp::forward: input cols " + std::to_string(input.cols()) +
                     " != in dim " + std::to_string(in_dim()));
  if (cache) {
    cache->layer_inputs.clear();
    cache->pre_activations.clear();
    cache->layer_inputs.reserve(layers_.size());
    cache->pre_activations.reserve(layers_.size());
  }
  Matrix current = input;
  for (const DenseLayer& layer : layers_) {
    Matrix pre = linear_forward(current, layer.weights, layer.biases);
    Matrix post = activation_apply(layer.activation, pre);
    if (cache) {
      cache->layer_inputs.push_back(std::move(current));
      cache->pre_activations.push_back(std::move(pre));
    }
    current = std::move(post);
  }
  return current;
}

Matrix Mlp::backward(const ForwardCache& cache, const Matrix& output_grad, MlpGrads& grads) const {
  if (cache.layer_inputs.size() != layers_.size() ||
      cache.pre_activations.size() != layers_.size())
    throw ShapeError("Mlp::backward: cache does not match this network");
  if (grads.weights.size() != layers_.size())
    throw ShapeError("Mlp::backward: grads not initialised via grads_like()");
  if (output_grad.rows() != cache.layer_inputs.front().rows() ||
      output_grad.cols() != out_dim())
    throw ShapeError("Mlp::backward: output_grad shape mismatch");

  Matrix upstream = output_grad;
  for (std::size_t li = layers_.size(); li-- > 0;) {
    const DenseLayer& layer = layers_[li];
    const Matrix& pre = cache.pre_activations[li];
    if (pre.rows() != upstream.rows() || pre.cols() != upstream.cols())
      throw ShapeError("Mlp::backward: stale cache for layer " + std::to_string(li));

    // dZ = upstream ⊙ act'(pre)
    Matrix dz = upstream;
    if (layer.activation != Activation::kLinear) {
      auto dzd = dz.data();
      auto pred = pre.data();
      for (std::size_t i = 0; i < dzd.size(); ++i)
        dzd[i] *= activation_derivative(layer.activation, pred[i]);
    }

    Matrix dw = matmul_tn(cache.layer_inputs[li], dz);
    auto& wacc = grads.weights[li];
    for (std::size_t i = 0; i < dw.size(); ++i) wacc.data()[i] += dw.data()[i];
    const std::vector<double> db = column_sums(dz);
    auto& bacc = grads.biases[li];
    for (std::size_t i = 0; i < db.size(); ++i) bacc[i] += db[i];

    upstream = matmul_nt(dz, layer.weights);
  }
  return upstream;
}

MlpGrads Mlp::grads_like() const {
  MlpGrads grads;
  grads.weights.reserve(layers_.size());
  grads.biases.reserve(layers_.size());
  for (const DenseLayer& layer : layers_) {
    grads.weights.emplace_back(layer.in_dim(), layer.out_dim());
    grads.biases.emplace_back(layer.out_dim(), 0.0);
  }
  return grads;
}

std::size_t Mlp::param_count() const {
  std::size_t n = 0;
  for (const DenseLayer& layer : layers_) n += layer.weights.size() + layer.biases.size();
  return n;
}

void Mlp::flatten_params(std::span<double> out) const {
  if (out.size() != param_count()) throw ShapeError("flatten_params: bad span length");
  std::size_t offset = 0;
  for (const DenseLayer& layer : layers_) {
    for (double v : layer.weights.data()) out[offset++] = v;
    for (double v : layer.biases) out[offset++] = v;
  }
}

void Mlp::unflatten_params(std::span<const double> in) {
  if (in.size() != param_count()) throw ShapeError("unflatten_params: bad span length");
  std::size_t offset = 0;
  for (DenseLayer& layer : layers_) {
    for (double& v : layer.weights.data()) v = in[offset++];
    for (double& v : layer.biases) v = in[offset++];
  }
}

void Mlp::flatten_grads(const MlpGrads& grads, std::span<double> out) {
  std::size_t offset = 0;
  for (std::size_t li = 0; li < grads.weights.size(); ++li) {
    for (double v : grads.weights[li].data()) out[offset++] = v;
    for (double v : grads.biases[li]) out[offset++] = v;
  }
  if (offset != out.size()) throw ShapeError("flatten_grads: bad span length");
}

MseResult mse_loss(const Matrix& pred, const Matrix& truth) {
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols())
    throw ShapeError("mse_loss: shape mismatch");
  if (pred.rows() == 0) throw ShapeError("mse_loss: empty batch");
  const double inv_rows = 1.0 / static_cast<double>(pred.rows());
  Matrix grad(pred.rows(), pred.cols());
  double loss = 0.0;
  auto p = pred.data();
  auto t = truth.data();
  auto g = grad.data();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - t[i];
    loss += d * d;
    g[i] = 2.0 * d * inv_rows;
  }
  return {loss * inv_rows, std::move(grad)};
}

}  // namespace smpred
