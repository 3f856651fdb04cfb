#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "mqs/sparse/linear_operator.hpp"

namespace mqs {

/// Ring buffer of the most recent solutions of one right-hand-side family.
class SnapshotBuffer {
 public:
  explicit SnapshotBuffer(std::size_t capacity = 10, double eps_pod = 1e-4);

  void push(std::span<const double> solution);
  std::size_t size() const { return snapshots_.size(); }
  std::size_t capacity() const { return capacity_; }
  double eps() const { return eps_pod_; }
  /// Oldest first.
  const std::deque<Vector>& snapshots() const { return snapshots_; }

  double info_kept() const { return info_kept_; }
  void set_info_kept(double v) { info_kept_ = v; }

 private:
  std::size_t capacity_;
  double eps_pod_;
  std::deque<Vector> snapshots_;
  double info_kept_ = 1.0;
};

/// Number of leading singular values kept: those with sigma_i / sigma_1 > eps.
std::size_t pod_truncation(std::span<const double> sigma, double eps);

/// sum_{i<k} sigma_i / sum_i sigma_i. Defined as 1 when every sigma is zero.
double information_kept(std::span<const double> sigma, std::size_t k);

struct PodBasis {
  Vector singular_values;     // descending, one per snapshot
  std::vector<Vector> modes;  // first k left singular vectors
  std::size_t k = 0;
  double info_kept = 1.0;
};

/// Thin SVD of the snapshot matrix by the method of snapshots: eigenpairs of
/// the small Gram matrix X^T X give sigma_i^2 and v_i, and u_i = X v_i / sigma_i.
PodBasis pod_basis(const std::deque<Vector>& snapshots, double eps_pod);

struct PodStartVector {
  Vector x0;
  std::size_t k = 0;
  double info_kept = 1.0;
};

/// x0 = U_k (U_k^T K U_k)^-1 U_k^T rhs over the truncated POD modes. The
/// Galerkin matrix is rebuilt from scratch (k operator applications). On a
/// singular Galerkin matrix k is truncated to the failing pivot and retried.
PodStartVector pod_start_vector(SnapshotBuffer& buffer, std::span<const double> rhs, const LinearOperator& k);

}  // namespace mqs
