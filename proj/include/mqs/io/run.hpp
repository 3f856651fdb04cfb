#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "mqs/implicit/implicit_euler.hpp"
#include "mqs/model/assemble.hpp"
#include "mqs/schur/explicit_euler.hpp"

namespace mqs {

enum class Integrator { Explicit, Implicit };

std::string_view to_string(Integrator integrator);
Integrator parse_integrator(std::string_view name);

struct RunConfig {
  std::string model = "builtin:8";
  Integrator integrator = Integrator::Explicit;
  StartStrategyKind strategy = StartStrategyKind::Cspe;
  std::optional<double> dt;  // nullopt: auto (CFL for explicit, implicit_dt otherwise)
  double t_end = 0.12;
  double output_period = 1e-3;

  double tol = 1e-8;  // inner PCG relative tolerance
  std::size_t max_iter = 10000;
  PreconditionerKind preconditioner = PreconditionerKind::IncompleteCholesky0;
  double eps_pod = 1e-4;
  std::size_t n_pod = 10;
  std::size_t max_basis = 20;
  bool cache_source = false;

  std::size_t cfl_every = 500;
  double cfl_safety = 0.9;
  std::size_t power_iters = 2000;
  double power_tol = 1e-8;

  double newton_tol = 1e-8;
  std::size_t max_newton = 25;
  double implicit_dt = 2.5e-4;

  std::uint64_t seed = 42;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;

  SchurOptions schur_options() const;
  ExplicitRunConfig explicit_config() const;
  NewtonConfig newton_config() const;
};

/// Overrides fields from a JSON object whose keys mirror the CLI flags
/// (model, integrator, strategy, dt, t_end, tol, eps_pod, ...). Unknown
/// keys are rejected.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// Parses a dt value: a positive number or "auto".
std::optional<double> parse_dt(const std::string& text);

/// One integrator run on an assembled model.
TransientResult run_model(const RunConfig& config, const AssembledModel& model);

}  // namespace mqs
