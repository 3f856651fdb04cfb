#include "mqs/startvec/snapshot_pod.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mqs/startvec/small_dense.hpp"

namespace mqs {

SnapshotBuffer::SnapshotBuffer(std::size_t capacity, double eps_pod) : capacity_(capacity), eps_pod_(eps_pod) {
  if (capacity_ < 1) throw std::invalid_argument("SnapshotBuffer: capacity must be at least 1");
  if (!(eps_pod_ > 0.0 && eps_pod_ < 1.0)) throw std::invalid_argument("SnapshotBuffer: eps_pod must lie in (0, 1)");
}

void SnapshotBuffer::push(std::span<const double> solution) {
  if (!snapshots_.empty() && solution.size() != snapshots_.front().size())
    throw std::invalid_argument("SnapshotBuffer::push: length mismatch");
  if (snapshots_.size() == capacity_) snapshots_.pop_front();
  snapshots_.emplace_back(solution.begin(), solution.end());
}

std::size_t pod_truncation(std::span<const double> sigma, double eps) {
  if (sigma.empty() || !(sigma[0] > 0.0)) return 0;
  std::size_t k = 0;
  while (k < sigma.size() && sigma[k] / sigma[0] > eps) ++k;
  return k;
}

double information_kept(std::span<const double> sigma, std::size_t k) {
  double kept = 0.0, total = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    total += sigma[i];
    if (i < k) kept += sigma[i];
  }
  return total > 0.0 ? kept / total : 1.0;
}

PodBasis pod_basis(const std::deque<Vector>& snapshots, double eps_pod) {
  const std::size_t m = snapshots.size();
  PodBasis out;
  if (m == 0) return out;
  DenseMatrix gram(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) gram(i, j) = gram(j, i) = dot(snapshots[i], snapshots[j]);
  const SymmetricEigen eig = jacobi_eigen(gram);
  out.singular_values.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.singular_values[i] = std::sqrt(std::max(eig.values[i], 0.0));
  out.k = pod_truncation(out.singular_values, eps_pod);
  out.info_kept = information_kept(out.singular_values, out.k);
  const std::size_t n = snapshots.front().size();
  for (std::size_t j = 0; j < out.k; ++j) {
    Vector u(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) axpy(eig.vectors(i, j), snapshots[i], u);
    scale(1.0 / out.singular_values[j], u);
    out.modes.push_back(std::move(u));
  }
  return out;
}

PodStartVector pod_start_vector(SnapshotBuffer& buffer, std::span<const double> rhs, const LinearOperator& k) {
  if (buffer.size() == 0) throw std::invalid_argument("pod_start_vector: snapshot buffer is empty");
  if (rhs.size() != k.size() || buffer.snapshots().front().size() != rhs.size())
    throw std::invalid_argument("pod_start_vector: length mismatch");

  PodBasis pod = pod_basis(buffer.snapshots(), buffer.eps());
  buffer.set_info_kept(pod.info_kept);
  PodStartVector out{Vector(rhs.size(), 0.0), pod.k, pod.info_kept};

  std::vector<Vector> products;
  products.reserve(pod.k);
  for (const Vector& u : pod.modes) products.push_back(k(u));

  std::size_t kk = pod.k;
  while (kk > 0) {
    DenseMatrix g(kk, kk);
    for (std::size_t i = 0; i < kk; ++i)
      for (std::size_t j = i; j < kk; ++j) g(i, j) = g(j, i) = dot(pod.modes[i], products[j]);
    auto chol = cholesky(g);
    if (chol.failed_pivot) {
      kk = *chol.failed_pivot;
      continue;
    }
    Vector proj(kk);
    for (std::size_t j = 0; j < kk; ++j) proj[j] = dot(pod.modes[j], rhs);
    const Vector c = cholesky_solve(chol.lower, proj);
    for (std::size_t j = 0; j < kk; ++j) axpy(c[j], pod.modes[j], out.x0);
    break;
  }
  out.k = kk;
  return out;
}

}  // namespace mqs
