#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "mqs/io/run.hpp"
#include "mqs/io/trace.hpp"

namespace mqs {

struct StrategySummary {
  StartStrategyKind kind = StartStrategyKind::Previous;
  std::array<double, kRhsFamilyCount> mean_iterations_family{};
  double mean_iterations = 0.0;
  std::size_t solves = 0;
  std::size_t iterations = 0;
  std::size_t kn_applications = 0;
  std::size_t strategy_applications = 0;
  std::size_t max_basis_cols = 0;
  double min_pod_info = 1.0;
  double b_end = 0.0;
  double checksum = 0.0;          // sum of the probe trace plus ||a_c(t_end)||
  TraceDifference vs_reference{};  // zero when no reference was run
  double wall_seconds = 0.0;
  double solver_seconds = 0.0;
  bool complete = true;
  TransientResult result;
};

struct ReferenceSummary {
  bool ran = false;
  double dt = 0.0;
  std::size_t steps = 0;
  std::size_t newton_iterations = 0;
  std::size_t linear_iterations = 0;
  double b_end = 0.0;
  double checksum = 0.0;
  double wall_seconds = 0.0;
  double solver_seconds = 0.0;
  bool complete = true;
  TransientResult result;
};

struct BenchmarkSummary {
  std::string model;
  std::size_t n_c = 0, n_n = 0;
  double dt = 0.0;  // shared explicit step
  double lambda_max = 0.0;
  std::size_t steps = 0;
  double t_end = 0.0;
  double tol = 0.0;
  PreconditionerKind preconditioner = PreconditionerKind::IncompleteCholesky0;
  std::uint64_t seed = 0;
  std::vector<StrategySummary> strategies;  // previous, pod, cspe
  ReferenceSummary reference;
};

/// Runs the three start-vector strategies with one shared step size (the
/// CFL bound at the zero state unless config.dt is set), the same
/// tolerance and preconditioner, then the implicit reference.
BenchmarkSummary run_bench(const RunConfig& config, const AssembledModel& model, bool with_reference = true);

/// Aligned text table of the strategy comparison.
std::string format_bench_table(const BenchmarkSummary& summary);

/// summary.csv, bench.json and per-run traces (all deterministic), plus
/// timing.json and the summary.txt table with wall times, into `dir`.
void write_bench(const BenchmarkSummary& summary, const std::filesystem::path& dir);

}  // namespace mqs
