#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mqs/sparse/vector_ops.hpp"

namespace mqs {

/// Row-major dense matrix for the small Galerkin and snapshot systems
/// (dimension <= a few dozen).
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  /// Removes row and column `k` of a square matrix.
  void erase_row_col(std::size_t k);
  /// Grows a square matrix by one row/column, zero-filled.
  void grow();

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Cholesky factor L (lower) of a symmetric matrix. On failure returns the
/// index of the first pivot that is not safely positive: d <= rel_pivot_tol
/// * max_i A_ii.
struct CholeskyOutcome {
  DenseMatrix lower;
  std::optional<std::size_t> failed_pivot;
};
CholeskyOutcome cholesky(const DenseMatrix& a, double rel_pivot_tol = 1e-13);
Vector cholesky_solve(const DenseMatrix& lower, std::span<const double> b);

/// Eigenpairs of a symmetric matrix by cyclic Jacobi rotations, sorted by
/// descending eigenvalue. Column j of `vectors` pairs with values[j].
struct SymmetricEigen {
  Vector values;
  DenseMatrix vectors;
};
SymmetricEigen jacobi_eigen(const DenseMatrix& a, std::size_t max_sweeps = 100);

}  // namespace mqs
