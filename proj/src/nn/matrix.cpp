#include "smpred/nn/matrix.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "smpred/common/error.hpp"

namespace smpred {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajor>;
using MutMap = Eigen::Map<RowMajor>;

ConstMap map_of(const Matrix& m) {
  return ConstMap(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                  static_cast<Eigen::Index>(m.cols()));
}

MutMap map_of(Matrix& m) {
  return MutMap(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                static_cast<Eigen::Index>(m.cols()));
}

[[noreturn]] void shape_fail(const char* op, const Matrix& a, const Matrix& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " + std::to_string(a.rows()) + "x" +
                   std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                   std::to_string(b.cols()));
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_)
    throw ShapeError("Matrix: value count " + std::to_string(values_.size()) +
                     " does not match " + std::to_string(rows_) + "x" + std::to_string(cols_));
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  Matrix out(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("Matrix::from_rows: ragged rows");
    std::size_t j = 0;
    for (double v : row) out(i, j++) = v;
    ++i;
  }
  return out;
}

bool Matrix::is_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) shape_fail("matmul", a, b);
  Matrix c(a.rows(), b.cols());
  map_of(c).noalias() = map_of(a) * map_of(b);
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) shape_fail("matmul_tn", a, b);
  Matrix c(a.cols(), b.cols());
  map_of(c).noalias() = map_of(a).transpose() * map_of(b);
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) shape_fail("matmul_nt", a, b);
  Matrix c(a.rows(), b.rows());
  map_of(c).noalias() = map_of(a) * map_of(b).transpose();
  return c;
}

Matrix linear_forward(const Matrix& x, const Matrix& w, std::span<const double> bias) {
  if (x.cols() != w.rows()) shape_fail("linear_forward", x, w);
  if (bias.size() != w.cols())
    throw ShapeError("linear_forward: bias length " + std::to_string(bias.size()) +
                     " != out dim " + std::to_string(w.cols()));
  Matrix y(x.rows(), w.cols());
  auto ym = map_of(y);
  ym.noalias() = map_of(x) * map_of(w);
  const Eigen::Map<const Eigen::RowVectorXd> bv(bias.data(),
                                                static_cast<Eigen::Index>(bias.size()));
  ym.rowwise() += bv;
  return y;
}

std::vector<double> column_sums(const Matrix& m) {
  std::vector<double> sums(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) sums[c] += row[c];
  }
  return sums;
}

Matrix hstack(std::span<const Matrix* const> blocks) {
  if (blocks.empty()) return {};
  const std::size_t rows = blocks.front()->rows();
  std::size_t cols = 0;
  for (const Matrix* b : blocks) {
    if (b->rows() != rows) throw ShapeError("hstack: row counts differ");
    cols += b->cols();
  }
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    auto dst = out.row(r);
    std::size_t offset = 0;
    for (const Matrix* b : blocks) {
      const auto src = b->row(r);
      for (std::size_t c = 0; c < src.size(); ++c) dst[offset + c] = src[c];
      offset += src.size();
    }
  }
  return out;
}

Matrix slice_cols(const Matrix& m, std::size_t begin, std::size_t end) {
  if (begin > end || end > m.cols()) throw ShapeError("slice_cols: bad column range");
  Matrix out(m.rows(), end - begin);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto src = m.row(r);
    auto dst = out.row(r);
    for (std::size_t c = begin; c < end; ++c) dst[c - begin] = src[c];
  }
  return out;
}

}  // namespace smpred
