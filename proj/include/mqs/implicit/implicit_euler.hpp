#pragma once

#include <span>
#include <vector>

#include "mqs/errors.hpp"
#include "mqs/krylov/pcg.hpp"
#include "mqs/schur/partitioned_system.hpp"
#include "mqs/schur/transient_result.hpp"

namespace mqs {

struct NewtonConfig {
  double tol = 1e-8;  // on ||R|| / ||R_0|| within a step
  std::size_t max_newton = 25;
  PcgConfig linear{1e-10, 0.0, 20000, PreconditionerKind::IncompleteCholesky0};

  void validate() const;
};

/// Newton failed to reach the tolerance; carries the residual norms.
class NewtonError : public NumericalError {
 public:
  NewtonError(const std::string& what, std::vector<double> history)
      : NumericalError(what), history_(std::move(history)) {}
  const std::vector<double>& residual_history() const { return history_; }

 private:
  std::vector<double> history_;
};

struct DaeState {
  Vector a_c;
  Vector a_n;
  double t = 0.0;
};

struct ImplicitStepReport {
  std::size_t newton_iterations = 0;
  std::size_t linear_iterations = 0;
  std::vector<double> residual_history;  // ||R|| before each update and at exit
};

/// Backward-Euler residual of the full DAE at the unknown (a_c, a_n):
///   R_c = M_c (a_c - a_c_prev) / dt + K_c(a_c) a_c + K_cn a_n
///   R_n = K_cn^T a_c + K_n a_n - j_sn(t_next)
Vector dae_residual(const PartitionedSystem& sys, std::span<const double> a_c_prev, std::span<const double> a_c,
                    std::span<const double> a_n, double t_next, double dt);

/// Jacobian of dae_residual: [[M_c/dt + dK_c, K_cn], [K_cn^T, K_n]]. Symmetric
/// positive semidefinite; singular along the gradients that K_n annihilates.
CsrMatrix dae_jacobian(const PartitionedSystem& sys, std::span<const double> a_c, double dt);

/// One implicit Euler step of the monolithic DAE solved by Newton-Raphson
/// with PCG on the linearized system. A residual increase halves the update
/// once before the step is declared failed.
DaeState implicit_euler_step(const PartitionedSystem& sys, const DaeState& state, double dt,
                             const NewtonConfig& cfg, ImplicitStepReport* report = nullptr);

/// Uniform steps of size dt to t_end; rows every output_period (every step
/// if dt >= output_period). The CSV columns are shared with the explicit
/// run: iters_src holds the linear iterations of the step, the other
/// iteration columns are zero. A failed step stops the run with
/// complete = false.
TransientResult run_implicit(const PartitionedSystem& sys, double t_end, double dt, const NewtonConfig& cfg,
                             const Probe& probe, double output_period = 1e-3);

}  // namespace mqs
