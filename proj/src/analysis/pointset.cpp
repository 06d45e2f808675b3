#include "smpred/analysis/pointset.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "smpred/common/error.hpp"

namespace smpred {

Matrix AffineMap::apply(const Matrix& x) const {
  return linear_forward(x, linear, offset);
}

PointSet AffineMap::apply(const PointSet& x) const {
  PointSet out(apply(x.points));
  out.labels = x.labels;
  return out;
}

AffineMap affine_fit(const PointSet& x, const PointSet& y) {
  const std::size_t n = x.size();
  if (n != y.size())
    throw ShapeError("affine_fit: point counts differ (" + std::to_string(n) + " vs " +
                     std::to_string(y.size()) + ")");
  if (n < x.dim() + 1)
    throw DegenerateError("affine_fit: underdetermined, need at least dim+1 = " +
                          std::to_string(x.dim() + 1) + " points, got " + std::to_string(n));

  const auto din = static_cast<Eigen::Index>(x.dim());
  const auto dout = static_cast<Eigen::Index>(y.dim());
  const auto rows = static_cast<Eigen::Index>(n);

  Eigen::MatrixXd design(rows, din + 1);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto row = x.point(static_cast<std::size_t>(r));
    for (Eigen::Index c = 0; c < din; ++c) design(r, c) = row[static_cast<std::size_t>(c)];
    design(r, din) = 1.0;
  }
  Eigen::MatrixXd target(rows, dout);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto row = y.point(static_cast<std::size_t>(r));
    for (Eigen::Index c = 0; c < dout; ++c) target(r, c) = row[static_cast<std::size_t>(c)];
  }

  const Eigen::MatrixXd solution =
      design.completeOrthogonalDecomposition().solve(target);

  AffineMap map;
  map.linear = Matrix(x.dim(), y.dim());
  for (Eigen::Index r = 0; r < din; ++r)
    for (Eigen::Index c = 0; c < dout; ++c)
      map.linear(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = solution(r, c);
  map.offset.resize(y.dim());
  for (Eigen::Index c = 0; c < dout; ++c)
    map.offset[static_cast<std::size_t>(c)] = solution(din, c);
  return map;
}

Matrix pairwise_distances(const PointSet& s) {
  const std::size_t n = s.size();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto pi = s.point(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto pj = s.point(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < pi.size(); ++k) {
        const double diff = pi[k] - pj[k];
        acc += diff * diff;
      }
      const double dist = std::sqrt(acc);
      d(i, j) = dist;
      d(j, i) = dist;
    }
  }
  return d;
}

}  // namespace smpred
