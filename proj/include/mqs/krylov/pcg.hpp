#pragma once

#include <cstddef>
#include <span>

#include "mqs/errors.hpp"
#include "mqs/krylov/preconditioner.hpp"
#include "mqs/sparse/linear_operator.hpp"

namespace mqs {

struct PcgConfig {
  double rel_tol = 1e-8;  // on ||b - Ax|| / ||b||
  double abs_tol = 0.0;
  std::size_t max_iter = 10000;
  PreconditionerKind preconditioner = PreconditionerKind::Jacobi;

  void validate() const;
};

struct SolveReport {
  std::size_t iterations = 0;  // operator applications after the initial residual
  double final_rel_residual = 0.0;
  bool converged = false;
};

struct PcgResult {
  Vector x;
  SolveReport report;
};

/// Raised when p^T A p <= 0, i.e. the operator is not positive semidefinite
/// on the Krylov space.
class IndefiniteOperatorError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Preconditioned CG for symmetric positive (semi)definite operators. A
/// singular operator is fine as long as b lies in its range; no gauge or
/// regularization is applied. Stops when ||r|| <= max(rel_tol ||b||, abs_tol).
/// If x0 already meets that bound it is returned unchanged with 0 iterations.
/// Exceeding max_iter yields converged = false rather than an exception.
PcgResult pcg_solve(const LinearOperator& a, std::span<const double> b, std::span<const double> x0,
                    const PcgConfig& cfg, const Preconditioner& m);

/// Convenience overload that builds the preconditioner named in `cfg`.
PcgResult pcg_solve(const CsrMatrix& a, std::span<const double> b, std::span<const double> x0,
                    const PcgConfig& cfg);

}  // namespace mqs
