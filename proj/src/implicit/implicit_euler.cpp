#include "mqs/implicit/implicit_euler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mqs {

void NewtonConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("NewtonConfig: tol must be positive");
  if (max_newton < 1) throw std::invalid_argument("NewtonConfig: max_newton must be at least 1");
  linear.validate();
}

Vector dae_residual(const PartitionedSystem& sys, std::span<const double> a_c_prev, std::span<const double> a_c,
                    std::span<const double> a_n, double t_next, double dt) {
  const std::size_t nc = sys.n_c(), nn = sys.n_n();
  if (a_c_prev.size() != nc || a_c.size() != nc || a_n.size() != nn)
    throw std::invalid_argument("dae_residual: dimension mismatch");
  Vector r(nc + nn);
  std::span<double> rc(r.data(), nc), rn(r.data() + nc, nn);

  const Vector diff = lincomb(1.0 / dt, a_c, -1.0 / dt, a_c_prev);
  sys.mass_c.multiply(diff, rc);
  axpy(1.0, sys.stiffness_c.apply(a_c), rc);
  axpy(1.0, spmv(sys.coupling, a_n), rc);

  sys.stiffness_n.multiply(a_n, rn);
  axpy(1.0, spmv_transpose(sys.coupling, a_c), rn);
  axpy(-1.0, sys.source.at(t_next), rn);
  return r;
}

CsrMatrix dae_jacobian(const PartitionedSystem& sys, std::span<const double> a_c, double dt) {
  const std::size_t nc = sys.n_c(), nn = sys.n_n();
  std::vector<Triplet> t;
  for (const auto& e : sys.mass_c.triplets()) t.push_back({e.row, e.col, e.value / dt});
  for (const auto& e : sys.stiffness_c.jacobian(a_c).triplets()) t.push_back(e);
  for (const auto& e : sys.coupling.triplets()) {
    t.push_back({e.row, nc + e.col, e.value});
    t.push_back({nc + e.col, e.row, e.value});
  }
  for (const auto& e : sys.stiffness_n.triplets()) t.push_back({nc + e.row, nc + e.col, e.value});
  return CsrMatrix::from_triplets(nc + nn, nc + nn, std::move(t));
}

DaeState implicit_euler_step(const PartitionedSystem& sys, const DaeState& state, double dt,
                             const NewtonConfig& cfg, ImplicitStepReport* report) {
  cfg.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("implicit_euler_step: dt must be positive");
  const std::size_t nc = sys.n_c(), nn = sys.n_n();
  const double t_next = state.t + dt;

  Vector z(nc + nn);
  std::copy(state.a_c.begin(), state.a_c.end(), z.begin());
  std::copy(state.a_n.begin(), state.a_n.end(), z.begin() + static_cast<std::ptrdiff_t>(nc));
  auto residual = [&](const Vector& zz) {
    return dae_residual(sys, state.a_c, std::span<const double>(zz.data(), nc),
                        std::span<const double>(zz.data() + nc, nn), t_next, dt);
  };

  ImplicitStepReport local;
  Vector r = residual(z);
  double rnorm = norm2(r);
  const double r0 = rnorm;
  local.residual_history.push_back(rnorm);

  while (rnorm > cfg.tol * r0) {
    if (local.newton_iterations == cfg.max_newton)
      throw NewtonError("Newton did not converge in " + std::to_string(cfg.max_newton) + " iterations at t = " +
                            std::to_string(t_next),
                        local.residual_history);
    const CsrMatrix jac = dae_jacobian(sys, std::span<const double>(z.data(), nc), dt);
    Vector neg_r = r;
    scale(-1.0, neg_r);
    const Vector zero(z.size(), 0.0);
    // Inexact Newton: the correction need not be resolved below a tenth of
    // the Newton target, which also keeps PCG away from the rounding floor.
    PcgConfig lin_cfg = cfg.linear;
    lin_cfg.abs_tol = std::max(lin_cfg.abs_tol, 0.1 * cfg.tol * r0);
    PcgResult lin = pcg_solve(jac, neg_r, zero, lin_cfg);
    local.linear_iterations += lin.report.iterations;
    ++local.newton_iterations;
    // A stalled solve on the semidefinite monolithic matrix still gives a
    // usable Newton direction once the residual is well reduced; the Newton
    // residual check decides.
    if (!lin.report.converged && !(lin.report.final_rel_residual <= std::sqrt(lin_cfg.rel_tol)))
      throw NumericalError("implicit Euler: linear solve failed at t = " + std::to_string(t_next) +
                           ", relative residual " + std::to_string(lin.report.final_rel_residual) + " after " +
                           std::to_string(lin.report.iterations) + " iterations");

    Vector trial = z;
    axpy(1.0, lin.x, trial);
    Vector r_trial = residual(trial);
    double n_trial = norm2(r_trial);
    if (n_trial > rnorm) {
      trial = z;
      axpy(0.5, lin.x, trial);
      r_trial = residual(trial);
      n_trial = norm2(r_trial);
      if (n_trial > rnorm) {
        local.residual_history.push_back(n_trial);
        throw NewtonError("Newton residual increased at t = " + std::to_string(t_next), local.residual_history);
      }
    }
    z = std::move(trial);
    r = std::move(r_trial);
    rnorm = n_trial;
    local.residual_history.push_back(rnorm);
  }

  DaeState out;
  out.a_c.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(nc));
  out.a_n.assign(z.begin() + static_cast<std::ptrdiff_t>(nc), z.end());
  out.t = t_next;
  if (!all_finite(out.a_c) || !all_finite(out.a_n))
    throw NumericalError("implicit Euler: non-finite state at t = " + std::to_string(t_next));
  if (report) *report = std::move(local);
  return out;
}

TransientResult run_implicit(const PartitionedSystem& sys, double t_end, double dt, const NewtonConfig& cfg,
                             const Probe& probe, double output_period) {
  if (!(t_end > 0.0)) throw std::invalid_argument("run_implicit: t_end must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("run_implicit: dt must be positive");
  if (!(output_period > 0.0)) throw std::invalid_argument("run_implicit: output period must be positive");
  cfg.validate();

  const auto wall_start = std::chrono::steady_clock::now();
  TransientResult result;
  DaeState state{Vector(sys.n_c(), 0.0), Vector(sys.n_n(), 0.0), 0.0};
  result.a_c = state.a_c;
  result.a_n = state.a_n;

  const std::size_t total = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  const std::size_t per_row =
      dt >= output_period * (1.0 - 1e-9)
          ? 1
          : std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(output_period / dt)));
  std::size_t row_linear = 0;
  try {
    for (std::size_t m = 1; m <= total; ++m) {
      ImplicitStepReport rep;
      const auto t0 = std::chrono::steady_clock::now();
      DaeState next = implicit_euler_step(sys, state, dt, cfg, &rep);
      result.solver_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      // Recompute t from the step index so rows land on the output grid.
      next.t = static_cast<double>(m) * dt;
      state = std::move(next);
      result.newton_iterations += rep.newton_iterations;
      result.linear_iterations += rep.linear_iterations;
      row_linear += rep.linear_iterations;
      result.steps = m;
      result.dt = dt;
      result.t_final = state.t;
      result.a_c = state.a_c;
      result.a_n = state.a_n;
      if (m % per_row == 0 || m == total) {
        TraceRow row;
        row.t = state.t;
        row.b_probe = probe ? probe(state.a_c, state.a_n) : 0.0;
        row.iters_src = row_linear;
        result.rows.push_back(row);
        row_linear = 0;
      }
    }
  } catch (const NumericalError& e) {
    result.complete = false;
    result.failure = e.what();
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return result;
}

}  // namespace mqs
