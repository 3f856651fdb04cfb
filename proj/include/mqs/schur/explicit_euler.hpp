#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "mqs/schur/schur_operator.hpp"
#include "mqs/schur/transient_result.hpp"

namespace mqs {

struct ExplicitStepReport {
  SolveReport source;
  SolveReport coupling_previous;
};

/// One explicit Euler step of the Schur-complement ODE
///
///   M_c da_c/dt + K_S(a_c) a_c = -K_cn K_n^+ j_sn
///
/// a^m = a^{m-1} + dt M_c^-1 [-K_cn K_n^+ j_sn(t_m) - K_S(a^{m-1}) a^{m-1}],
/// t_m = t_prev + dt. Runs exactly two K_n solves (source and coupling from
/// the previous state). Throws NumericalError naming `step_index` if the
/// new state is not finite.
Vector explicit_euler_step(SchurOperator& op, std::span<const double> a_c, double t_prev, double dt,
                           std::size_t step_index = 0, ExplicitStepReport* report = nullptr);

/// a_n = K_n^+ j_sn(t) - K_n^+ K_cn^T a_c. The source solve is shared with
/// the step that reached t when available.
Vector recover_an(SchurOperator& op, std::span<const double> a_c, double t, SolveReport* coupling_report = nullptr);

struct ExplicitRunConfig {
  double t_end = 0.12;
  std::optional<double> dt;  // nullopt: derive from the CFL estimate
  double output_period = 1e-3;
  std::size_t cfl_every = 500;  // steps between CFL re-estimates (auto dt only)
  double cfl_safety = 0.9;
  std::size_t power_iters = 2000;
  double power_tol = 1e-8;
  std::uint64_t seed = 42;
};

/// Fixed or CFL-derived step size with output rows every output_period. In
/// auto mode dt divides the output period and is shrunk, never grown, when a
/// re-estimate at the current state tightens the bound.
TransientResult run_explicit(const PartitionedSystem& system, const ExplicitRunConfig& config,
                             const SchurOptions& options, const Probe& probe);

}  // namespace mqs
