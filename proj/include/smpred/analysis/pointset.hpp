#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "smpred/nn/matrix.hpp"

namespace smpred {

// A cloud of n points in R^dim, row per point. Optional labels group points
// that share a ground-truth position (redundant motor states).
struct PointSet {
  Matrix points;            // n x dim
  std::vector<int> labels;  // empty or length n

  PointSet() = default;
  explicit PointSet(Matrix m) : points(std::move(m)) {}
  PointSet(Matrix m, std::vector<int> l) : points(std::move(m)), labels(std::move(l)) {}

  std::size_t size() const { return points.rows(); }
  std::size_t dim() const { return points.cols(); }
  std::span<const double> point(std::size_t i) const { return points.row(i); }
};

// y ~ x * linear + offset (row-vector convention).
struct AffineMap {
  Matrix linear;               // dim_in x dim_out
  std::vector<double> offset;  // dim_out

  Matrix apply(const Matrix& x) const;
  PointSet apply(const PointSet& x) const;
};

// Least-squares affine map X -> Y via a complete orthogonal decomposition of
// the constant-augmented design matrix; minimum-norm solution when the design
// is rank-deficient (a collapsed cloud is an expected regime, not a failure).
// Requires n >= dim(X) + 1.
AffineMap affine_fit(const PointSet& x, const PointSet& y);

// Euclidean distances, symmetric with zero diagonal.
Matrix pairwise_distances(const PointSet& s);

}  // namespace smpred
