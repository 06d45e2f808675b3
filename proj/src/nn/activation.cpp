#include "smpred/nn/activation.hpp"

#include <cmath>

#include "smpred/common/error.hpp"

namespace smpred {

double activation_apply(Activation kind, double x) {
  switch (kind) {
    case Activation::kSelu:
      return x > 0.0 ? kSeluLambda * x : kSeluLambda * kSeluAlpha * std::expm1(x);
    case Activation::kRelu:
      return x > 0.0 ? x : 0.0;
    case Activation::kLinear:
      return x;
  }
  throw ConfigError("unknown activation");
}

double activation_derivative(Activation kind, double x) {
  switch (kind) {
    case Activation::kSelu:
      return x >= 0.0 ? kSeluLambda : kSeluLambda * kSeluAlpha * std::exp(x);
    case Activation::kRelu:
      return x > 0.0 ? 1.0 : 0.0;
    case Activation::kLinear:
      return 1.0;
  }
  throw ConfigError("unknown activation");
}

Matrix activation_apply(Activation kind, const Matrix& m) {
  if (kind == Activation::kLinear) return m;
  Matrix out(m.rows(), m.cols());
  auto src = m.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = activation_apply(kind, src[i]);
  return out;
}

std::string to_string(Activation kind) {
  switch (kind) {
    case Activation::kSelu:
      return "selu";
    case Activation::kRelu:
      return "relu";
    case Activation::kLinear:
      return "linear";
  }
  throw ConfigError("unknown activation");
}

Activation activation_from_string(const std::string& name) {
  if (name == "selu" || name == "SELU") return Activation::kSelu;
  if (name == "relu" || name == "RELU") return Activation::kRelu;
  if (name == "linear" || name == "LINEAR") return Activation::kLinear;
  throw ConfigError("unknown activation: " + name);
}

}  // namespace smpred
