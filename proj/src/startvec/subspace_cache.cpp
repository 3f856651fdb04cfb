#include "mqs/startvec/subspace_cache.hpp"

#include <stdexcept>

#include "mqs/startvec/gram_schmidt.hpp"

namespace mqs {

SubspaceCache::SubspaceCache(std::size_t max_cols, double drop_tol) : max_cols_(max_cols), drop_tol_(drop_tol) {
  if (max_cols_ < 1) throw std::invalid_argument("SubspaceCache: max_cols must be at least 1");
}

bool SubspaceCache::insert(std::span<const double> solution, const LinearOperator& k) {
  if (!basis_.empty() && solution.size() != basis_.front().size())
    throw std::invalid_argument("SubspaceCache::insert: length mismatch");
  if (solution.size() != k.size()) throw std::invalid_argument("SubspaceCache::insert: operator size mismatch");

  auto u = orthonormalize_against(basis_, solution, drop_tol_);
  if (!u) return false;
  if (basis_.size() == max_cols_) {
    drop_column(0);
    // The evicted direction may carry part of the new vector.
    u = orthonormalize_against(basis_, solution, drop_tol_);
    if (!u) return false;
  }

  Vector ku = k(*u);
  ++products_computed_;
  galerkin_.grow();
  const std::size_t last = basis_.size();
  for (std::size_t j = 0; j < last; ++j) {
    const double g = dot(products_[j], *u);
    galerkin_(j, last) = g;
    galerkin_(last, j) = g;
  }
  galerkin_(last, last) = dot(*u, ku);
  basis_.push_back(std::move(*u));
  products_.push_back(std::move(ku));
  ++columns_accepted_;
  return true;
}

void SubspaceCache::drop_column(std::size_t j) {
  if (j >= basis_.size()) throw std::out_of_range("SubspaceCache::drop_column");
  basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(j));
  products_.erase(products_.begin() + static_cast<std::ptrdiff_t>(j));
  galerkin_.erase_row_col(j);
}

void SubspaceCache::clear() {
  basis_.clear();
  products_.clear();
  galerkin_ = DenseMatrix();
}

Vector spe_start_vector(SubspaceCache& cache, std::span<const double> rhs) {
  Vector x0(rhs.size(), 0.0);
  while (!cache.empty()) {
    if (cache.basis().front().size() != rhs.size()) throw std::invalid_argument("spe_start_vector: length mismatch");
    auto chol = cholesky(cache.galerkin());
    if (chol.failed_pivot) {
      cache.drop_column(*chol.failed_pivot);
      continue;
    }
    const auto& u = cache.basis();
    Vector proj(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) proj[j] = dot(u[j], rhs);
    const Vector c = cholesky_solve(chol.lower, proj);
    for (std::size_t j = 0; j < u.size(); ++j) axpy(c[j], u[j], x0);
    break;
  }
  return x0;
}

}  // namespace mqs
