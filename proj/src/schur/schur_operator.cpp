#include "mqs/schur/schur_operator.hpp"

#include <chrono>
#include <stdexcept>
#include <string>

namespace mqs {

std::size_t TransientResult::total_solves() const {
  std::size_t n = 0;
  for (const auto& f : families) n += f.solves;
  return n;
}

std::size_t TransientResult::total_iterations() const {
  std::size_t n = 0;
  for (const auto& f : families) n += f.iterations;
  return n;
}

double TransientResult::mean_iterations() const {
  const std::size_t n = total_solves();
  return n ? static_cast<double>(total_iterations()) / static_cast<double>(n) : 0.0;
}

double TransientResult::mean_iterations(RhsFamily family) const {
  const auto& f = families[static_cast<std::size_t>(family)];
  return f.solves ? static_cast<double>(f.iterations) / static_cast<double>(f.solves) : 0.0;
}

SchurOperator::SchurOperator(const PartitionedSystem& system, SchurOptions options)
    : system_(&system),
      options_(options),
      kn_(system.stiffness_n),
      kn_counter_(kn_),
      precond_(build_preconditioner(system.stiffness_n, options.inner.preconditioner)),
      strategy_(make_strategy(options.start, kn_)) {
  options_.inner.validate();
  if (system.mass_c.is_diagonal()) {
    Vector d = system.mass_c.diagonal();
    for (double& v : d) {
      if (!(v > 0.0)) throw std::invalid_argument("SchurOperator: M_c diagonal must be positive");
      v = 1.0 / v;
    }
    mass_inv_diag_ = std::move(d);
  }
}

PcgResult SchurOperator::run_pcg(std::span<const double> rhs, std::span<const double> x0) {
  const auto start = std::chrono::steady_clock::now();
  PcgResult r = pcg_solve(kn_counter_, rhs, x0, options_.inner, precond_);
  solver_seconds_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

Vector SchurOperator::solve_n(RhsFamily family, std::span<const double> rhs, SolveReport* report) {
  const Vector x0 = strategy_->start_vector(family, rhs);
  PcgResult r = run_pcg(rhs, x0);
  auto& tot = totals_[static_cast<std::size_t>(family)];
  ++tot.solves;
  tot.iterations += r.report.iterations;
  if (report) *report = r.report;
  if (!r.report.converged)
    throw InnerSolveError("K_n solve (" + std::string(to_string(family)) + ") did not converge in " +
                              std::to_string(r.report.iterations) + " iterations, relative residual " +
                              std::to_string(r.report.final_rel_residual),
                          r.report);
  strategy_->record(family, r.x);
  return std::move(r.x);
}

PcgResult SchurOperator::solve_n_from(std::span<const double> rhs, std::span<const double> x0) {
  PcgResult r = run_pcg(rhs, x0);
  if (!r.report.converged)
    throw InnerSolveError("auxiliary K_n solve did not converge, relative residual " +
                              std::to_string(r.report.final_rel_residual),
                          r.report);
  return r;
}

Vector SchurOperator::source_solve(double t, SolveReport* report) {
  if (source_time_ && *source_time_ == t) {
    if (report) *report = SolveReport{0, 0.0, true};
    return source_last_;
  }
  if (options_.cache_source_solve) {
    if (!source_unit_) source_unit_ = solve_n(RhsFamily::SourceCurrent, system_->source.pattern, report);
    else if (report) *report = SolveReport{0, 0.0, true};
    source_last_ = *source_unit_;
    scale(system_->source.waveform(t), source_last_);
  } else {
    source_last_ = solve_n(RhsFamily::SourceCurrent, system_->source.at(t), report);
  }
  source_time_ = t;
  return source_last_;
}

Vector SchurOperator::apply_schur(std::span<const double> a_c, std::span<const double> state,
                                  std::optional<RhsFamily> family, SolveReport* report) {
  const PartitionedSystem& s = *system_;
  if (a_c.size() != s.n_c() || state.size() != s.n_c()) throw std::invalid_argument("apply_schur: dimension mismatch");
  const Vector rhs = spmv_transpose(s.coupling, a_c);
  Vector y;
  if (family) {
    y = solve_n(*family, rhs, report);
  } else {
    const Vector zero(rhs.size(), 0.0);
    PcgResult r = solve_n_from(rhs, zero);
    if (report) *report = r.report;
    y = std::move(r.x);
  }
  Vector out(s.n_c());
  s.stiffness_c.apply(state, a_c, out);
  const Vector back = spmv(s.coupling, y);
  axpy(-1.0, back, out);
  return out;
}

Vector SchurOperator::apply_mass_inverse(std::span<const double> f) {
  if (f.size() != system_->n_c()) throw std::invalid_argument("apply_mass_inverse: dimension mismatch");
  if (mass_inv_diag_) {
    Vector out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = (*mass_inv_diag_)[i] * f[i];
    return out;
  }
  if (mass_last_.size() != f.size()) mass_last_.assign(f.size(), 0.0);
  PcgConfig cfg = options_.inner;
  cfg.preconditioner = PreconditionerKind::Jacobi;
  PcgResult r = pcg_solve(system_->mass_c, f, mass_last_, cfg);
  if (!r.report.converged) throw InnerSolveError("M_c solve did not converge", r.report);
  mass_last_ = r.x;
  return std::move(r.x);
}

}  // namespace mqs
