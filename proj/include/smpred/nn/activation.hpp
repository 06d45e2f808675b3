#pragma once

#include <string>

#include "smpred/nn/matrix.hpp"

namespace smpred {

enum class Activation { kSelu, kRelu, kLinear };

// SELU constants from Klambauer et al.'s self-normalizing network derivation.
inline constexpr double kSeluLambda = 1.0507009873554805;
inline constexpr double kSeluAlpha = 1.6732632423543772;

double activation_apply(Activation kind, double x);
// Derivative as a function of the pre-activation. The SELU derivative at
// exactly 0 is taken as lambda (the right-limit).
double activation_derivative(Activation kind, double x);

Matrix activation_apply(Activation kind, const Matrix& m);

std::string to_string(Activation kind);
Activation activation_from_string(const std::string& name);

}  // namespace smpred
