#include "mqs/krylov/preconditioner.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mqs {

std::string_view to_string(PreconditionerKind kind) {
  switch (kind) {
    case PreconditionerKind::None: return "none";
    case PreconditionerKind::Jacobi: return "jacobi";
    case PreconditionerKind::IncompleteCholesky0: return "ic0";
  }
  return "unknown";
}

PreconditionerKind parse_preconditioner(std::string_view name) {
  if (name == "none") return PreconditionerKind::None;
  if (name == "jacobi") return PreconditionerKind::Jacobi;
  if (name == "ic0") return PreconditionerKind::IncompleteCholesky0;
  throw std::invalid_argument("unknown preconditioner '" + std::string(name) + "'");
}

Preconditioner Preconditioner::identity(std::size_t n) {
  Preconditioner p;
  p.kind_ = PreconditionerKind::None;
  p.n_ = n;
  return p;
}

Preconditioner Preconditioner::jacobi(const CsrMatrix& a) {
  if (!a.square()) throw std::invalid_argument("jacobi: matrix is not square");
  Preconditioner p;
  p.kind_ = PreconditionerKind::Jacobi;
  p.n_ = a.nrows();
  p.inv_diag_ = a.diagonal();
  for (double& d : p.inv_diag_) {
    if (d < 0.0) throw std::invalid_argument("jacobi: negative diagonal entry");
    d = d > 0.0 ? 1.0 / d : 1.0;
  }
  return p;
}

std::optional<Preconditioner> Preconditioner::incomplete_cholesky(const CsrMatrix& a) {
  if (!a.square()) throw std::invalid_argument("ic0: matrix is not square");
  const std::size_t n = a.nrows();
  const auto& arp = a.row_ptr();
  const auto& aci = a.col_idx();
  const auto& av = a.values();

  // Lower pattern of A, diagonal last in each row.
  std::vector<std::size_t> rp(n + 1, 0), ci;
  std::vector<double> v;
  for (std::size_t i = 0; i < n; ++i) {
    bool has_diag = false;
    for (std::size_t k = arp[i]; k < arp[i + 1] && aci[k] <= i; ++k) {
      ci.push_back(aci[k]);
      v.push_back(av[k]);
      has_diag = aci[k] == i;
    }
    if (!has_diag) return std::nullopt;
    rp[i + 1] = ci.size();
  }

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t diag_pos = rp[i + 1] - 1;
    for (std::size_t kk = rp[i]; kk < diag_pos; ++kk) {
      const std::size_t k = ci[kk];
      // sum_{j<k} L_ij L_kj over the shared pattern
      double s = 0.0;
      std::size_t pi = rp[i], pk = rp[k];
      const std::size_t ek = rp[k + 1] - 1;
      while (pi < kk && pk < ek) {
        if (ci[pi] == ci[pk]) {
          s += v[pi] * v[pk];
          ++pi;
          ++pk;
        } else if (ci[pi] < ci[pk]) {
          ++pi;
        } else {
          ++pk;
        }
      }
      v[kk] = (v[kk] - s) / v[ek];
    }
    double d = v[diag_pos];
    for (std::size_t kk = rp[i]; kk < diag_pos; ++kk) d -= v[kk] * v[kk];
    if (!(d > 0.0)) return std::nullopt;
    v[diag_pos] = std::sqrt(d);
  }

  Preconditioner p;
  p.kind_ = PreconditionerKind::IncompleteCholesky0;
  p.n_ = n;
  p.factor_ = CsrMatrix(n, n, std::move(rp), std::move(ci), std::move(v));
  return p;
}

void Preconditioner::apply(std::span<const double> r, std::span<double> z) const {
  if (r.size() != n_ || z.size() != n_) throw std::invalid_argument("preconditioner: dimension mismatch");
  switch (kind_) {
    case PreconditionerKind::None:
      std::copy(r.begin(), r.end(), z.begin());
      return;
    case PreconditionerKind::Jacobi:
      for (std::size_t i = 0; i < n_; ++i) z[i] = inv_diag_[i] * r[i];
      return;
    case PreconditionerKind::IncompleteCholesky0: {
      const auto& rp = factor_.row_ptr();
      const auto& ci = factor_.col_idx();
      const auto& v = factor_.values();
      // L y = r
      for (std::size_t i = 0; i < n_; ++i) {
        double s = r[i];
        const std::size_t d = rp[i + 1] - 1;
        for (std::size_t k = rp[i]; k < d; ++k) s -= v[k] * z[ci[k]];
        z[i] = s / v[d];
      }
      // L^T z = y, column sweep
      for (std::size_t i = n_; i-- > 0;) {
        const std::size_t d = rp[i + 1] - 1;
        z[i] /= v[d];
        const double zi = z[i];
        for (std::size_t k = rp[i]; k < d; ++k) z[ci[k]] -= v[k] * zi;
      }
      return;
    }
  }
}

Preconditioner build_preconditioner(const CsrMatrix& a, PreconditionerKind kind) {
  switch (kind) {
    case PreconditionerKind::None: return Preconditioner::identity(a.nrows());
    case PreconditionerKind::Jacobi: return Preconditioner::jacobi(a);
    case PreconditionerKind::IncompleteCholesky0:
      if (auto ic = Preconditioner::incomplete_cholesky(a)) return std::move(*ic);
      return Preconditioner::jacobi(a);
  }
  throw std::invalid_argument("build_preconditioner: unknown kind");
}

}  // namespace mqs
