#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mqs/sparse/vector_ops.hpp"

namespace mqs {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row; duplicates are never stored. Immutable once built.
class CsrMatrix {
 public:
  CsrMatrix() : row_ptr_(1, 0) {}

  /// Takes ownership of raw CSR arrays; throws std::invalid_argument if
  /// they violate the storage invariants.
  CsrMatrix(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_ptr,
            std::vector<std::size_t> col_idx, std::vector<double> values);

  /// Canonicalizes COO input: sorts by (row, col) and sums duplicates.
  static CsrMatrix from_triplets(std::size_t nrows, std::size_t ncols, std::vector<Triplet> triplets);
  static CsrMatrix identity(std::size_t n);
  static CsrMatrix from_diagonal(std::span<const double> diag);

  std::size_t nrows() const { return nrows_; }
  std::size_t ncols() const { return ncols_; }
  std::size_t nnz() const { return values_.size(); }
  bool square() const { return nrows_ == ncols_; }

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  /// Entry (i, j); zero when not stored.
  double at(std::size_t i, std::size_t j) const;
  Vector diagonal() const;
  bool is_diagonal() const;
  double max_abs() const;

  CsrMatrix transpose() const;
  std::vector<Triplet> triplets() const;

  /// y = A x, summed in stored row order.
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y = A^T x without forming the transpose.
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;

  friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

 private:
  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

Vector spmv(const CsrMatrix& a, std::span<const double> x);
Vector spmv_transpose(const CsrMatrix& a, std::span<const double> x);

/// True iff max |A_ij - A_ji| <= tol over the union of both patterns.
bool symmetric_check(const CsrMatrix& a, double tol);

/// Index map entry for `extract_block`: position in the block, or `kDropped`.
inline constexpr std::size_t kDropped = static_cast<std::size_t>(-1);

/// Rows/columns of `a` remapped through `row_map`/`col_map`; entries whose
/// row or column maps to kDropped are discarded.
CsrMatrix extract_block(const CsrMatrix& a, std::span<const std::size_t> row_map, std::size_t nrows,
                        std::span<const std::size_t> col_map, std::size_t ncols);

/// C = A * B (sparse-sparse).
CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b);

}  // namespace mqs
