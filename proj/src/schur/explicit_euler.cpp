#include "mqs/schur/explicit_euler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mqs/schur/cfl.hpp"

namespace mqs {

Vector explicit_euler_step(SchurOperator& op, std::span<const double> a_c, double t_prev, double dt,
                           std::size_t step_index, ExplicitStepReport* report) {
  const PartitionedSystem& s = op.system();
  if (a_c.size() != s.n_c()) throw std::invalid_argument("explicit_euler_step: state dimension mismatch");
  if (!(dt >= 0.0)) throw std::invalid_argument("explicit_euler_step: dt must be nonnegative");
  const double t = t_prev + dt;

  ExplicitStepReport local;
  const Vector x_src = op.source_solve(t, &local.source);
  Vector f = op.apply_schur(a_c, a_c, RhsFamily::CouplingFromPreviousState, &local.coupling_previous);
  // f = -K_S(a) a - K_cn K_n^+ j_sn(t_m)
  scale(-1.0, f);
  axpy(-1.0, spmv(s.coupling, x_src), f);
  const Vector rate = op.apply_mass_inverse(f);

  Vector next(a_c.begin(), a_c.end());
  axpy(dt, rate, next);
  if (!all_finite(next))
    throw NumericalError("explicit Euler: non-finite state after step " + std::to_string(step_index));
  if (report) *report = local;
  return next;
}

Vector recover_an(SchurOperator& op, std::span<const double> a_c, double t, SolveReport* coupling_report) {
  const PartitionedSystem& s = op.system();
  if (a_c.size() != s.n_c()) throw std::invalid_argument("recover_an: state dimension mismatch");
  Vector a_n = op.source_solve(t);
  const Vector rhs = spmv_transpose(s.coupling, a_c);
  const Vector y = op.solve_n(RhsFamily::CouplingFromCurrentState, rhs, coupling_report);
  axpy(-1.0, y, a_n);
  return a_n;
}

namespace {

void fill_diagnostics(const StartVectorStrategy& strategy, TraceRow& row) {
  row.basis_cols = 0;
  row.pod_k = 0;
  row.pod_info = 1.0;
  for (RhsFamily f : kAllRhsFamilies) {
    const auto& d = strategy.diagnostics(f);
    row.basis_cols = std::max(row.basis_cols, d.basis_cols);
    row.pod_k = std::max(row.pod_k, d.pod_k);
    if (d.pod_evaluations > 0) row.pod_info = std::min(row.pod_info, d.pod_info);
  }
}

}  // namespace

TransientResult run_explicit(const PartitionedSystem& system, const ExplicitRunConfig& config,
                             const SchurOptions& options, const Probe& probe) {
  if (!(config.t_end > 0.0)) throw std::invalid_argument("run_explicit: t_end must be positive");
  if (!(config.output_period > 0.0)) throw std::invalid_argument("run_explicit: output period must be positive");
  if (config.dt && !(*config.dt > 0.0)) throw std::invalid_argument("run_explicit: dt must be positive");

  const auto wall_start = std::chrono::steady_clock::now();
  SchurOperator op(system, options);
  TransientResult result;
  Vector a(system.n_c(), 0.0);
  result.a_c = a;

  double dt_max = 0.0;
  if (!config.dt) {
    dt_max = estimate_cfl(op, a, config.power_iters, config.power_tol, config.cfl_safety, {}, config.seed).dt_max;
  }
  const bool per_step_rows = config.dt && *config.dt >= config.output_period * (1.0 - 1e-9);
  const double tol_t = 1e-9 * std::min(config.output_period, config.t_end);

  double t = 0.0;
  std::size_t steps_since_cfl = 0;
  std::size_t row_index = 0;
  try {
    while (t < config.t_end - tol_t) {
      double row_end = 0.0;
      std::size_t n_sub = 1;
      if (per_step_rows) {
        // times from the step index so they do not drift
        row_end = std::min(static_cast<double>(result.steps + 1) * *config.dt, config.t_end);
        if (config.t_end - row_end < tol_t) row_end = config.t_end;
      } else {
        row_end = std::min(static_cast<double>(++row_index) * config.output_period, config.t_end);
        if (config.t_end - row_end < tol_t) row_end = config.t_end;
        const double len = row_end - t;
        if (config.dt) {
          n_sub = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(len / *config.dt)));
        } else {
          if (steps_since_cfl >= config.cfl_every) {
            const CflEstimate e =
                estimate_cfl(op, a, config.power_iters, config.power_tol, config.cfl_safety, {}, config.seed);
            dt_max = std::min(dt_max, e.dt_max);
            steps_since_cfl = 0;
          }
          n_sub = static_cast<std::size_t>(std::ceil(len / dt_max - 1e-9));
          n_sub = std::max<std::size_t>(n_sub, 1);
        }
      }
      const double t0 = t;
      const double h = (row_end - t0) / static_cast<double>(n_sub);
      ExplicitStepReport step_report;
      for (std::size_t j = 1; j <= n_sub; ++j) {
        const double t_prev = t;
        t = j == n_sub ? row_end : t0 + static_cast<double>(j) * h;
        a = explicit_euler_step(op, a, t_prev, t - t_prev, result.steps + 1, &step_report);
        ++result.steps;
        ++steps_since_cfl;
        result.dt = t - t_prev;
        result.a_c = a;
        result.t_final = t;
      }
      SolveReport cur;
      result.a_n = recover_an(op, a, t, &cur);
      TraceRow row;
      row.t = t;
      row.b_probe = probe ? probe(a, result.a_n) : 0.0;
      row.iters_src = step_report.source.iterations;
      row.iters_cpl_prev = step_report.coupling_previous.iterations;
      row.iters_cpl_cur = cur.iterations;
      fill_diagnostics(op.strategy(), row);
      result.rows.push_back(row);
    }
  } catch (const NumericalError& e) {
    result.complete = false;
    result.failure = e.what();
  }

  for (RhsFamily f : kAllRhsFamilies) {
    result.families[static_cast<std::size_t>(f)] = op.totals(f);
    const auto& d = op.strategy().diagnostics(f);
    result.strategy_applications += d.operator_applications;
    result.max_basis_cols = std::max(result.max_basis_cols, d.max_basis_cols);
    if (d.pod_evaluations > 0) {
      result.min_pod_info = std::min(result.min_pod_info, d.min_pod_info);
      result.pod_evaluations += d.pod_evaluations;
    }
  }
  result.kn_applications = op.kn_applications();
  result.solver_seconds = op.solver_seconds();
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return result;
}

}  // namespace mqs
