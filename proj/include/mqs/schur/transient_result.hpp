#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mqs/sparse/vector_ops.hpp"
#include "mqs/startvec/strategy.hpp"

namespace mqs {

/// Scalar field observable evaluated at output times, e.g. the averaged
/// flux density over a set of probe cells.
using Probe = std::function<double(std::span<const double> a_c, std::span<const double> a_n)>;

struct TraceRow {
  double t = 0.0;
  double b_probe = 0.0;
  std::size_t iters_src = 0;
  std::size_t iters_cpl_prev = 0;
  std::size_t iters_cpl_cur = 0;
  std::size_t basis_cols = 0;
  std::size_t pod_k = 0;
  double pod_info = 1.0;
};

struct FamilyTotals {
  std::size_t solves = 0;
  std::size_t iterations = 0;
};

struct TransientResult {
  std::vector<TraceRow> rows;
  Vector a_c;
  Vector a_n;
  std::size_t steps = 0;
  double dt = 0.0;        // last step size used
  double t_final = 0.0;

  std::array<FamilyTotals, kRhsFamilyCount> families{};
  std::size_t kn_applications = 0;        // inside PCG, incl. initial residuals
  std::size_t strategy_applications = 0;  // spent building start vectors
  std::size_t newton_iterations = 0;      // implicit only
  std::size_t linear_iterations = 0;      // implicit only
  std::size_t max_basis_cols = 0;
  double min_pod_info = 1.0;
  std::size_t pod_evaluations = 0;

  double wall_seconds = 0.0;
  double solver_seconds = 0.0;

  bool complete = true;
  std::string failure;

  std::size_t total_solves() const;
  std::size_t total_iterations() const;
  double mean_iterations() const;
  double mean_iterations(RhsFamily family) const;
};

}  // namespace mqs
