#pragma once

#include <cstdint>
#include <span>

#include "mqs/schur/schur_operator.hpp"

namespace mqs {

struct CflEstimate {
  double lambda_max = 0.0;  // spectral radius of M_c^-1 K_S, 1/s
  double dt_max = 0.0;      // safety * 2 / lambda_max
  double safety = 0.9;
  std::size_t power_iters = 0;  // iterations actually used
  double power_tol = 0.0;
  bool converged = false;
};

/// Power iteration on v -> M_c^-1 K_S(a_c_ref) v with the Rayleigh quotient
/// v^T K_S v / v^T M_c v as the eigenvalue estimate. Stops once successive
/// estimates differ by less than power_tol (relative) or after power_iters.
/// An empty or zero `start` is replaced by a pseudo-random vector from `seed`.
CflEstimate estimate_cfl(SchurOperator& op, std::span<const double> a_c_ref, std::size_t power_iters = 2000,
                         double power_tol = 1e-8, double safety = 0.9, std::span<const double> start = {},
                         std::uint64_t seed = 42);

}  // namespace mqs
