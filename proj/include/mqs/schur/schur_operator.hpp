#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>

#include "mqs/krylov/pcg.hpp"
#include "mqs/schur/partitioned_system.hpp"
#include "mqs/schur/transient_result.hpp"
#include "mqs/startvec/strategy.hpp"

namespace mqs {

/// An inner K_n solve missed its tolerance.
class InnerSolveError : public NumericalError {
 public:
  InnerSolveError(const std::string& what, SolveReport report) : NumericalError(what), report_(report) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

struct SchurOptions {
  PcgConfig inner{1e-8, 0.0, 10000, PreconditionerKind::IncompleteCholesky0};
  StartVectorOptions start{};
  /// Solve K_n x = X_s once and scale by i_S(t) afterwards. Off by default
  /// so that every source solve is a real PCG solve.
  bool cache_source_solve = false;
};

/// Generalized Schur complement K_S(a) = K_c(a) - K_cn K_n^+ K_cn^T. The
/// pseudo-inverse is never formed; every application runs PCG on the
/// singular K_n with a strategy-provided start vector.
class SchurOperator {
 public:
  /// `system` must outlive the operator.
  SchurOperator(const PartitionedSystem& system, SchurOptions options);

  const PartitionedSystem& system() const { return *system_; }
  const SchurOptions& options() const { return options_; }
  StartVectorStrategy& strategy() { return *strategy_; }
  const StartVectorStrategy& strategy() const { return *strategy_; }
  PreconditionerKind preconditioner_kind() const { return precond_.kind(); }

  /// K_n^+ rhs for one right-hand-side family. Throws InnerSolveError.
  Vector solve_n(RhsFamily family, std::span<const double> rhs, SolveReport* report = nullptr);
  /// K_n^+ rhs from an explicit start vector, outside any family history.
  PcgResult solve_n_from(std::span<const double> rhs, std::span<const double> x0);

  /// K_n^+ j_sn(t), honouring cache_source_solve; repeated calls at the same
  /// t reuse the last solution.
  Vector source_solve(double t, SolveReport* report = nullptr);

  /// K_c(state) a_c - K_cn K_n^+ K_cn^T a_c. With a family the inner solve
  /// goes through the start-vector strategy; without one it starts from zero.
  Vector apply_schur(std::span<const double> a_c, std::span<const double> state,
                     std::optional<RhsFamily> family = RhsFamily::CouplingFromPreviousState,
                     SolveReport* report = nullptr);

  /// M_c^-1 f (diagonal division, or PCG when M_c is not diagonal).
  Vector apply_mass_inverse(std::span<const double> f);

  const FamilyTotals& totals(RhsFamily family) const { return totals_[static_cast<std::size_t>(family)]; }
  std::size_t kn_applications() const { return kn_counter_.count(); }
  double solver_seconds() const { return solver_seconds_; }

 private:
  PcgResult run_pcg(std::span<const double> rhs, std::span<const double> x0);

  const PartitionedSystem* system_;
  SchurOptions options_;
  MatrixOperator kn_;
  CountingOperator kn_counter_;
  Preconditioner precond_;
  std::unique_ptr<StartVectorStrategy> strategy_;
  std::array<FamilyTotals, kRhsFamilyCount> totals_{};
  std::optional<Vector> mass_inv_diag_;
  Vector mass_last_;
  std::optional<Vector> source_unit_;
  std::optional<double> source_time_;
  Vector source_last_;
  double solver_seconds_ = 0.0;
};

}  // namespace mqs
