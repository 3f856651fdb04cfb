#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mqs/sparse/linear_operator.hpp"
#include "mqs/startvec/small_dense.hpp"

namespace mqs {

/// Orthonormal history basis U for subspace projection extrapolation, with
/// the products K U and the Galerkin matrix U^T K U kept alongside. New
/// columns cost exactly one operator application; existing products are
/// never recomputed (the cascaded variant).
class SubspaceCache {
 public:
  explicit SubspaceCache(std::size_t max_cols = 20, double drop_tol = 1e-12);

  std::size_t columns() const { return basis_.size(); }
  std::size_t max_columns() const { return max_cols_; }
  bool empty() const { return basis_.empty(); }
  const std::vector<Vector>& basis() const { return basis_; }
  const std::vector<Vector>& products() const { return products_; }
  const DenseMatrix& galerkin() const { return galerkin_; }

  /// Orthonormalizes `solution` against U and, if it survives, appends one
  /// column, its product K u, and a bordered row/column of the Galerkin
  /// matrix. The oldest column is evicted first when the cache is full.
  /// Returns whether a column was appended.
  bool insert(std::span<const double> solution, const LinearOperator& k);

  void drop_column(std::size_t j);
  void clear();

  /// Operator applications spent inside insert() over the cache lifetime.
  std::size_t products_computed() const { return products_computed_; }
  std::size_t columns_accepted() const { return columns_accepted_; }

 private:
  std::size_t max_cols_;
  double drop_tol_;
  std::vector<Vector> basis_;
  std::vector<Vector> products_;
  DenseMatrix galerkin_;
  std::size_t products_computed_ = 0;
  std::size_t columns_accepted_ = 0;
};

/// x0 = U (U^T K U)^-1 U^T rhs. Columns that make the Galerkin matrix
/// singular are dropped from the cache before retrying. Empty cache -> 0.
Vector spe_start_vector(SubspaceCache& cache, std::span<const double> rhs);

}  // namespace mqs
