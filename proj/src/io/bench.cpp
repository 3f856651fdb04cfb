#include "mqs/io/bench.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "mqs/errors.hpp"
#include "mqs/schur/cfl.hpp"

namespace mqs {

namespace {

double checksum(const TransientResult& r) {
  double s = 0.0;
  for (const TraceRow& row : r.rows) s += row.b_probe;
  return s + norm2(r.a_c);
}

std::string sci(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

BenchmarkSummary run_bench(const RunConfig& config, const AssembledModel& model, bool with_reference) {
  config.validate();
  BenchmarkSummary out;
  out.model = config.model;
  out.n_c = model.system.n_c();
  out.n_n = model.system.n_n();
  out.t_end = config.t_end;
  out.tol = config.tol;
  out.preconditioner = config.preconditioner;
  out.seed = config.seed;

  RunConfig shared = config;
  shared.integrator = Integrator::Explicit;
  if (config.dt) {
    out.dt = *config.dt;
  } else {
    RunConfig probe_cfg = shared;
    probe_cfg.strategy = StartStrategyKind::Previous;
    SchurOperator op(model.system, probe_cfg.schur_options());
    const CflEstimate est = estimate_cfl(op, Vector(model.system.n_c(), 0.0), config.power_iters, config.power_tol,
                                         config.cfl_safety, {}, config.seed);
    out.dt = est.dt_max;
    out.lambda_max = est.lambda_max;
  }
  shared.dt = out.dt;

  const Probe probe = model.probe();
  for (StartStrategyKind kind : {StartStrategyKind::Previous, StartStrategyKind::Pod, StartStrategyKind::Cspe}) {
    RunConfig c = shared;
    c.strategy = kind;
    StrategySummary s;
    s.kind = kind;
    s.result = run_explicit(model.system, c.explicit_config(), c.schur_options(), probe);
    const TransientResult& r = s.result;
    for (RhsFamily f : kAllRhsFamilies) s.mean_iterations_family[static_cast<std::size_t>(f)] = r.mean_iterations(f);
    s.mean_iterations = r.mean_iterations();
    s.solves = r.total_solves();
    s.iterations = r.total_iterations();
    s.kn_applications = r.kn_applications;
    s.strategy_applications = r.strategy_applications;
    s.max_basis_cols = r.max_basis_cols;
    s.min_pod_info = r.min_pod_info;
    s.b_end = r.rows.empty() ? 0.0 : r.rows.back().b_probe;
    s.checksum = checksum(r);
    s.wall_seconds = r.wall_seconds;
    s.solver_seconds = r.solver_seconds;
    s.complete = r.complete;
    out.steps = std::max(out.steps, r.steps);
    out.strategies.push_back(std::move(s));
  }

  if (with_reference) {
    ReferenceSummary& ref = out.reference;
    ref.ran = true;
    ref.dt = config.implicit_dt;
    ref.result = run_implicit(model.system, config.t_end, config.implicit_dt, config.newton_config(), probe,
                              config.output_period);
    const TransientResult& r = ref.result;
    ref.steps = r.steps;
    ref.newton_iterations = r.newton_iterations;
    ref.linear_iterations = r.linear_iterations;
    ref.b_end = r.rows.empty() ? 0.0 : r.rows.back().b_probe;
    ref.checksum = checksum(r);
    ref.wall_seconds = r.wall_seconds;
    ref.solver_seconds = r.solver_seconds;
    ref.complete = r.complete;
    if (!r.rows.empty())
      for (auto& s : out.strategies)
        if (!s.result.rows.empty()) s.vs_reference = compare_traces(s.result, r);
  }
  return out;
}

std::string format_bench_table(const BenchmarkSummary& b) {
  std::ostringstream os;
  os << "model " << b.model << "  n_c=" << b.n_c << "  n_n=" << b.n_n << "  dt=" << sci(b.dt) << "  steps=" << b.steps
     << "  tol=" << b.tol << "  preconditioner=" << to_string(b.preconditioner) << "\n\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-9s %9s %9s %9s %9s %10s %12s %6s %9s %10s %9s\n", "strategy", "mean_it",
                "src", "cpl_prev", "cpl_cur", "solves", "Kn_apps", "basis", "pod_info", "relL2_ref", "wall_s");
  os << line;
  for (const auto& s : b.strategies) {
    std::snprintf(line, sizeof(line), "%-9s %9.3f %9.3f %9.3f %9.3f %10zu %12zu %6zu %9.5f %10.3e %9.2f%s\n",
                  std::string(to_string(s.kind)).c_str(), s.mean_iterations, s.mean_iterations_family[0],
                  s.mean_iterations_family[2], s.mean_iterations_family[1], s.solves, s.kn_applications,
                  s.max_basis_cols, s.min_pod_info, s.vs_reference.rel_l2, s.wall_seconds,
                  s.complete ? "" : "  (incomplete)");
    os << line;
  }
  if (b.reference.ran) {
    os << "\nimplicit reference: dt=" << sci(b.reference.dt) << "  steps=" << b.reference.steps
       << "  newton=" << b.reference.newton_iterations << "  linear=" << b.reference.linear_iterations
       << "  wall_s=" << fixed(b.reference.wall_seconds, 2) << (b.reference.complete ? "" : "  (incomplete)") << '\n';
  }
  return os.str();
}

void write_bench(const BenchmarkSummary& b, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ModelError("cannot create output directory " + dir.string() + ": " + ec.message());
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw ModelError("cannot write " + (dir / name).string());
    return f;
  };

  {
    auto f = open("summary.csv");
    f << "strategy,mean_iters,mean_iters_src,mean_iters_cpl_prev,mean_iters_cpl_cur,solves,iterations,"
         "kn_applications,strategy_applications,max_basis_cols,min_pod_info,b_end,rel_l2_vs_implicit,"
         "endpoint_vs_implicit,checksum,complete\n";
    for (const auto& s : b.strategies)
      f << to_string(s.kind) << ',' << sci(s.mean_iterations) << ',' << sci(s.mean_iterations_family[0]) << ','
        << sci(s.mean_iterations_family[2]) << ',' << sci(s.mean_iterations_family[1]) << ',' << s.solves << ','
        << s.iterations << ',' << s.kn_applications << ',' << s.strategy_applications << ',' << s.max_basis_cols
        << ',' << sci(s.min_pod_info) << ',' << sci(s.b_end) << ',' << sci(s.vs_reference.rel_l2) << ','
        << sci(s.vs_reference.endpoint) << ',' << sci(s.checksum) << ',' << (s.complete ? 1 : 0) << '\n';
    if (b.reference.ran)
      f << "implicit,,,,," << b.reference.steps << ',' << b.reference.linear_iterations << ",,,,,"
        << sci(b.reference.b_end) << ",0,0," << sci(b.reference.checksum) << ',' << (b.reference.complete ? 1 : 0)
        << '\n';
  }
  {
    // wall times vary run to run; kept out of the CSV files
    nlohmann::json t = nlohmann::json::object();
    for (const auto& s : b.strategies)
      t[std::string(to_string(s.kind))] = {{"wall_seconds", s.wall_seconds}, {"solver_seconds", s.solver_seconds}};
    if (b.reference.ran)
      t["implicit"] = {{"wall_seconds", b.reference.wall_seconds}, {"solver_seconds", b.reference.solver_seconds}};
    auto f = open("timing.json");
    f << t.dump(2) << '\n';
  }
  {
    nlohmann::json m;
    m["model"] = b.model;
    m["n_c"] = b.n_c;
    m["n_n"] = b.n_n;
    m["shared"] = {{"dt", b.dt},
                   {"steps", b.steps},
                   {"t_end", b.t_end},
                   {"tol", b.tol},
                   {"preconditioner", std::string(to_string(b.preconditioner))},
                   {"seed", b.seed}};
    m["lambda_max"] = b.lambda_max;
    bool fair = true;
    for (const auto& s : b.strategies) fair = fair && s.result.steps == b.steps && s.result.dt == b.dt;
    m["shared"]["identical_steps"] = fair;
    if (b.reference.ran) m["implicit"] = {{"dt", b.reference.dt}, {"steps", b.reference.steps}};
    auto f = open("bench.json");
    f << m.dump(2) << '\n';
  }
  {
    auto f = open("summary.txt");
    f << format_bench_table(b);
  }
  for (const auto& s : b.strategies)
    if (!s.result.rows.empty())
      write_trace(s.result, dir / ("trace_" + std::string(to_string(s.kind)) + ".csv"));
  if (b.reference.ran && !b.reference.result.rows.empty())
    write_trace(b.reference.result, dir / "trace_implicit.csv");
}

}  // namespace mqs
