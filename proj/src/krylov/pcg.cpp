#include "mqs/krylov/pcg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mqs {

void PcgConfig::validate() const {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("PcgConfig: rel_tol must be positive");
  if (abs_tol < 0.0) throw std::invalid_argument("PcgConfig: abs_tol must be nonnegative");
  if (max_iter < 1) throw std::invalid_argument("PcgConfig: max_iter must be at least 1");
}

PcgResult pcg_solve(const LinearOperator& a, std::span<const double> b, std::span<const double> x0,
                    const PcgConfig& cfg, const Preconditioner& m) {
  cfg.validate();
  const std::size_t n = a.size();
  if (b.size() != n || x0.size() != n || m.size() != n) throw std::invalid_argument("pcg_solve: dimension mismatch");

  PcgResult out;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    // Minimum-norm solution of a consistent system with zero data.
    out.x.assign(n, 0.0);
    out.report = {0, 0.0, true};
    return out;
  }
  const double target = std::max(cfg.rel_tol * bnorm, cfg.abs_tol);

  out.x.assign(x0.begin(), x0.end());
  Vector r(n), z(n), p(n), q(n);
  a.apply(out.x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  double rnorm = norm2(r);
  if (rnorm <= target) {
    out.report = {0, rnorm / bnorm, true};
    return out;
  }

  m.apply(r, z);
  p = z;
  double rz = dot(r, z);
  std::size_t it = 0;
  double a_scale = 0.0;
  while (it < cfg.max_iter) {
    a.apply(p, q);
    ++it;
    const double pq = dot(p, q);
    // |p^T A p| at the rounding level of A p: p has fallen into the
    // numerical nullspace (semidefinite A, residual at its floor). Stop and
    // report instead of dividing by noise. ||A|| is bounded below by the
    // largest ||A p|| / ||p|| seen so far.
    const double pn = norm2(p);
    a_scale = std::max(a_scale, norm2(q) / pn);
    const double noise = 64.0 * std::sqrt(static_cast<double>(n)) * 2.220446049250313e-16 * a_scale * pn * pn;
    if (!std::isfinite(pq) || pq < -noise)
      throw IndefiniteOperatorError("pcg: p^T A p = " + std::to_string(pq) + " at iteration " +
                                    std::to_string(it) + "; operator is not positive semidefinite");
    if (pq <= noise) break;
    const double alpha = rz / pq;
    axpy(alpha, p, out.x);
    axpy(-alpha, q, r);
    rnorm = norm2(r);
    if (rnorm <= target) break;
    m.apply(r, z);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  out.report = {it, rnorm / bnorm, rnorm <= target};
  return out;
}

PcgResult pcg_solve(const CsrMatrix& a, std::span<const double> b, std::span<const double> x0,
                    const PcgConfig& cfg) {
  const MatrixOperator op(a);
  return pcg_solve(op, b, x0, cfg, build_preconditioner(a, cfg.preconditioner));
}

}  // namespace mqs
