// mqs: semi-explicit eddy-current time integration from the command line.
//
//   mqs generate --model builtin:8 --out model_dir
//   mqs run --integrator explicit --strategy cspe --dt auto --out trace.csv
//   mqs bench --model builtin:8 --out bench_out
//   mqs cfl --model builtin:8
//
// Every flag also reads MQS_<FLAG> from the environment (e.g. MQS_DT).
// Exit codes: 0 ok, 2 configuration/model error, 3 numerical failure.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "mqs/errors.hpp"
#include "mqs/io/bench.hpp"
#include "mqs/io/model_files.hpp"
#include "mqs/io/run.hpp"
#include "mqs/io/trace.hpp"
#include "mqs/schur/cfl.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> model;
  std::optional<std::string> integrator;
  std::optional<std::string> strategy;
  std::optional<std::string> dt;
  std::optional<double> t_end;
  std::optional<double> tol;
  std::optional<double> eps_pod;
  std::optional<std::size_t> n_pod;
  std::optional<std::size_t> max_basis;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> preconditioner;
  std::optional<double> implicit_dt;
  std::string out;
};

void add_common(CLI::App* app, Flags& f, bool run_flags) {
  app->add_option("--config", f.config, "JSON config file; flags override it")->envname("MQS_CONFIG");
  app->add_option("--model", f.model, "builtin[:N] or a model directory")->envname("MQS_MODEL");
  app->add_option("--tol", f.tol, "inner PCG relative tolerance")->envname("MQS_TOL");
  app->add_option("--seed", f.seed, "seed of the power-iteration start vector")->envname("MQS_SEED");
  app->add_option("--preconditioner", f.preconditioner, "none | jacobi | ic0")->envname("MQS_PRECONDITIONER");
  if (!run_flags) return;
  app->add_option("--integrator", f.integrator, "explicit | implicit")->envname("MQS_INTEGRATOR");
  app->add_option("--strategy", f.strategy, "previous | cspe | pod")->envname("MQS_STRATEGY");
  app->add_option("--dt", f.dt, "time step in seconds or 'auto'")->envname("MQS_DT");
  app->add_option("--t-end", f.t_end, "end time in seconds")->envname("MQS_T_END");
  app->add_option("--eps-pod", f.eps_pod, "POD truncation threshold")->envname("MQS_EPS_POD");
  app->add_option("--n-pod", f.n_pod, "POD snapshot count")->envname("MQS_N_POD");
  app->add_option("--max-basis", f.max_basis, "CSPE basis limit")->envname("MQS_MAX_BASIS");
  app->add_option("--implicit-dt", f.implicit_dt, "step of the implicit reference")->envname("MQS_IMPLICIT_DT");
}

mqs::RunConfig build_config(const Flags& f) {
  mqs::RunConfig c;
  if (f.config) mqs::apply_config_file(c, *f.config);
  if (f.model) c.model = *f.model;
  if (f.integrator) c.integrator = mqs::parse_integrator(*f.integrator);
  if (f.strategy) c.strategy = mqs::parse_strategy(*f.strategy);
  if (f.dt) c.dt = mqs::parse_dt(*f.dt);
  if (f.t_end) c.t_end = *f.t_end;
  if (f.tol) c.tol = *f.tol;
  if (f.eps_pod) c.eps_pod = *f.eps_pod;
  if (f.n_pod) c.n_pod = *f.n_pod;
  if (f.max_basis) c.max_basis = *f.max_basis;
  if (f.seed) c.seed = *f.seed;
  if (f.preconditioner) c.preconditioner = mqs::parse_preconditioner(*f.preconditioner);
  if (f.implicit_dt) c.implicit_dt = *f.implicit_dt;
  c.validate();
  return c;
}

int cmd_generate(const Flags& f) {
  const mqs::RunConfig c = build_config(f);
  const mqs::AssembledModel model = mqs::load_model_source(c.model);
  const std::string dir = f.out.empty() ? "model" : f.out;
  mqs::save_model(model, dir);
  std::printf("wrote %s: n_c=%zu n_n=%zu\n", dir.c_str(), model.system.n_c(), model.system.n_n());
  return 0;
}

int cmd_run(const Flags& f) {
  const mqs::RunConfig c = build_config(f);
  const mqs::AssembledModel model = mqs::load_model_source(c.model);
  const mqs::TransientResult r = mqs::run_model(c, model);
  const std::string path = f.out.empty() ? "trace.csv" : f.out;
  if (!r.rows.empty()) mqs::write_trace(r, path);
  std::printf("%s run: steps=%zu dt=%.6e t=%.6e solves=%zu mean_iters=%.4f wall=%.2fs\n",
              std::string(mqs::to_string(c.integrator)).c_str(), r.steps, r.dt, r.t_final, r.total_solves(),
              r.mean_iterations(), r.wall_seconds);
  if (!r.complete) {
    std::fprintf(stderr, "mqs: run stopped early: %s\n", r.failure.c_str());
    return kExitNumerical;
  }
  return 0;
}

int cmd_bench(const Flags& f, bool no_reference) {
  const mqs::RunConfig c = build_config(f);
  const mqs::AssembledModel model = mqs::load_model_source(c.model);
  const mqs::BenchmarkSummary b = mqs::run_bench(c, model, !no_reference);
  const std::string dir = f.out.empty() ? "bench_out" : f.out;
  mqs::write_bench(b, dir);
  std::fputs(mqs::format_bench_table(b).c_str(), stdout);
  for (const auto& s : b.strategies)
    if (!s.complete) {
      std::fprintf(stderr, "mqs: %s run stopped early: %s\n", std::string(mqs::to_string(s.kind)).c_str(),
                   s.result.failure.c_str());
      return kExitNumerical;
    }
  if (b.reference.ran && !b.reference.complete) {
    std::fprintf(stderr, "mqs: implicit reference stopped early: %s\n", b.reference.result.failure.c_str());
    return kExitNumerical;
  }
  return 0;
}

int cmd_cfl(const Flags& f, double safety) {
  mqs::RunConfig c = build_config(f);
  c.cfl_safety = safety;
  c.validate();
  const mqs::AssembledModel model = mqs::load_model_source(c.model);
  c.strategy = mqs::StartStrategyKind::Previous;
  mqs::SchurOperator op(model.system, c.schur_options());
  const mqs::CflEstimate e = mqs::estimate_cfl(op, mqs::Vector(model.system.n_c(), 0.0), c.power_iters,
                                               c.power_tol, c.cfl_safety, {}, c.seed);
  std::printf("lambda_max=%.10e\ndt_max=%.10e\nsafety=%g\npower_iters=%zu\nconverged=%s\n", e.lambda_max, e.dt_max,
              e.safety, e.power_iters, e.converged ? "true" : "false");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-explicit eddy-current time integration with recycled PCG start vectors"};
  app.require_subcommand(1);

  Flags f;
  bool no_reference = false;
  double safety = 0.9;

  auto* gen = app.add_subcommand("generate", "write a model directory (Matrix Market + manifest.json)");
  add_common(gen, f, false);
  gen->add_option("--out", f.out, "output directory")->envname("MQS_OUT");

  auto* run = app.add_subcommand("run", "one integrator run, trace written as CSV");
  add_common(run, f, true);
  run->add_option("--out", f.out, "trace CSV path")->envname("MQS_OUT");

  auto* bench = app.add_subcommand("bench", "compare previous / POD / CSPE start vectors against the implicit run");
  add_common(bench, f, true);
  bench->add_option("--out", f.out, "output directory")->envname("MQS_OUT");
  bench->add_flag("--no-reference", no_reference, "skip the implicit reference run");

  auto* cfl = app.add_subcommand("cfl", "estimate the largest stable explicit step");
  add_common(cfl, f, false);
  cfl->add_option("--safety", safety, "safety factor on 2/lambda_max")->envname("MQS_SAFETY");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*gen) return cmd_generate(f);
    if (*run) return cmd_run(f);
    if (*bench) return cmd_bench(f, no_reference);
    if (*cfl) return cmd_cfl(f, safety);
  } catch (const mqs::NumericalError& e) {
    std::fprintf(stderr, "mqs: numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const mqs::ModelError& e) {
    std::fprintf(stderr, "mqs: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "mqs: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "mqs: %s\n", e.what());
    return kExitConfig;
  }
  return 0;
}
