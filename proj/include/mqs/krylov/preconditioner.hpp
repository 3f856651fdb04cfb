#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "mqs/sparse/csr_matrix.hpp"

namespace mqs {

enum class PreconditionerKind { None, Jacobi, IncompleteCholesky0 };

std::string_view to_string(PreconditionerKind kind);
/// Accepts "none", "jacobi", "ic0"; throws std::invalid_argument otherwise.
PreconditionerKind parse_preconditioner(std::string_view name);

/// Action of M^-1 for PCG. Always symmetric positive definite.
class Preconditioner {
 public:
  static Preconditioner identity(std::size_t n);
  /// 1/A_ii; rows with A_ii == 0 (semidefinite null rows) act as identity.
  static Preconditioner jacobi(const CsrMatrix& a);
  /// Zero-fill incomplete Cholesky on the lower pattern of `a`. Returns
  /// nullopt when a pivot is not positive so the caller can degrade.
  static std::optional<Preconditioner> incomplete_cholesky(const CsrMatrix& a);

  PreconditionerKind kind() const { return kind_; }
  std::size_t size() const { return n_; }
  void apply(std::span<const double> r, std::span<double> z) const;

 private:
  PreconditionerKind kind_ = PreconditionerKind::None;
  std::size_t n_ = 0;
  Vector inv_diag_;
  CsrMatrix factor_;  // lower triangular, diagonal stored last in each row
};

/// Requested kind, except that a failed IC(0) degrades to Jacobi; check
/// `kind()` on the result to see what was built.
Preconditioner build_preconditioner(const CsrMatrix& a, PreconditionerKind kind);

}  // namespace mqs
