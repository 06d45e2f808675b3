#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace smpred {

// Dense row-major matrix of doubles. Rows hold batch samples (m, s, h, ...).
// Multiplication kernels are backed by Eigen through maps over this storage;
// the storage layout itself stays under our control so serialization is
// bit-exact.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);  // zero-filled
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  // Row-wise literal, e.g. Matrix::from_rows({{1, 2}, {3, 4}}).
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<double> data() { return values_; }
  std::span<const double> data() const { return values_; }
  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

  bool is_finite() const;
  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// C = A * B. Throws ShapeError when inner dimensions disagree.
Matrix matmul(const Matrix& a, const Matrix& b);
// C = A^T * B.
Matrix matmul_tn(const Matrix& a, const Matrix& b);
// C = A * B^T.
Matrix matmul_nt(const Matrix& a, const Matrix& b);

// X * W with `bias` broadcast over rows.
Matrix linear_forward(const Matrix& x, const Matrix& w, std::span<const double> bias);

// Column sums (length cols).
std::vector<double> column_sums(const Matrix& m);

// Horizontal concatenation of equally tall blocks.
Matrix hstack(std::span<const Matrix* const> blocks);
// Columns [begin, end) as a new matrix.
Matrix slice_cols(const Matrix& m, std::size_t begin, std::size_t end);

}  // namespace smpred
