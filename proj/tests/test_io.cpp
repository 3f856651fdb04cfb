#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mqs/io/bench.hpp"
#include "mqs/io/model_files.hpp"
#include "mqs/io/run.hpp"
#include "mqs/io/trace.hpp"
#include "mqs/model/builtin.hpp"
#include "mqs/sparse/matrix_market.hpp"
#include "oracle.hpp"

using namespace mqs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mqs_test_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void check_load_error(const fs::path& dir, const std::string& needle) {
  try {
    load_system(dir);
    FAIL("expected ModelError containing '" << needle << "'");
  } catch (const ModelError& e) {
    CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
  }
}

RunConfig short_run() {
  RunConfig c;
  c.model = "builtin:6";
  c.t_end = 0.003;
  return c;
}

}  // namespace

TEST_CASE("model export / import roundtrip is exact") {
  const AssembledModel m = builtin_model(6);
  const fs::path dir = scratch("roundtrip");
  save_model(m, dir);
  for (const char* f : {"manifest.json", "M_c.mtx", "K_c.mtx", "K_cn.mtx", "K_n.mtx", "X_s.mtx"}) CHECK(fs::exists(dir / f));
  const AssembledModel back = load_system(dir);
  CHECK(back.system == m.system);
  CHECK(back.dofs.conducting == m.dofs.conducting);
  CHECK(back.dofs.nonconducting == m.dofs.nonconducting);
  CHECK(back.probe_cells == m.probe_cells);
  CHECK(back.grid.cells.empty());
  // manifest path works as well as the directory
  CHECK(load_system(dir / "manifest.json").system == m.system);
  // the probe survives without the region map
  std::mt19937_64 rng(1);
  const Vector ac = oracle::random_vector(rng, m.system.n_c()), an = oracle::random_vector(rng, m.system.n_n());
  CHECK(back.probe()(ac, an) == m.probe()(ac, an));
}

TEST_CASE("loader rejects broken blocks by name") {
  const AssembledModel m = builtin_model(6);
  const fs::path dir = scratch("broken");
  save_model(m, dir);

  // asymmetric K_n
  auto t = m.system.stiffness_n.triplets();
  t.push_back({0, 1, 1.0});
  write_matrix_market(dir / "K_n.mtx", CsrMatrix::from_triplets(m.system.n_n(), m.system.n_n(), t));
  check_load_error(dir, "K_n");

  // K_cn removed from the manifest
  save_model(m, dir);
  std::string manifest = slurp(dir / "manifest.json");
  const auto pos = manifest.find("\"K_cn\"");
  REQUIRE(pos != std::string::npos);
  manifest.replace(pos, 6, "\"K_xx\"");
  std::ofstream(dir / "manifest.json") << manifest;
  check_load_error(dir, "K_cn");

  // dimension mismatch in M_c
  save_model(m, dir);
  write_matrix_market(dir / "M_c.mtx", CsrMatrix::identity(3));
  check_load_error(dir, "M_c");

  // missing file
  save_model(m, dir);
  fs::remove(dir / "X_s.mtx");
  check_load_error(dir, "X_s");

  CHECK_THROWS_AS(load_system(scratch("empty")), ModelError);
}

TEST_CASE("model sources") {
  CHECK(load_model_source("builtin").system.n_c() == 96);
  CHECK(load_model_source("builtin:6").grid.nx == 6);
  CHECK_THROWS_AS(load_model_source("builtin:x"), ModelError);
  CHECK_THROWS_AS(load_model_source("builtin:4"), ModelError);
  CHECK_THROWS_AS(load_model_source("/nonexistent/model/dir"), ModelError);
}

TEST_CASE("trace writer") {
  TransientResult empty;
  std::ostringstream s0;
  CHECK_THROWS_AS(write_trace(empty, s0), std::invalid_argument);

  RunConfig c = short_run();
  c.dt = 1e-3;
  const TransientResult r = run_model(c, load_model_source(c.model));
  REQUIRE(r.rows.size() == 3);
  std::ostringstream s;
  write_trace(r, s);
  std::istringstream in(s.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == kTraceHeader);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 7);
  }
  CHECK(rows == 3);
  CHECK_THROWS_AS(write_trace(r, fs::path("/nonexistent/dir/trace.csv")), ModelError);
}

TEST_CASE("format_double roundtrips") {
  for (double v : {0.0, 1.0, 0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.001) == "0.001");
}

TEST_CASE("compare_traces") {
  TransientResult a, b;
  for (int k = 1; k <= 4; ++k) {
    TraceRow r;
    r.t = 0.001 * k;
    r.b_probe = k;
    b.rows.push_back(r);
    r.b_probe = k * 1.1;
    a.rows.push_back(r);
  }
  const TraceDifference d = compare_traces(a, b);
  CHECK(d.common_rows == 4);
  CHECK(d.rel_l2 == doctest::Approx(0.1));
  CHECK(d.endpoint == doctest::Approx(0.1));
}

TEST_CASE("run configuration") {
  CHECK_FALSE(parse_dt("auto").has_value());
  CHECK(parse_dt("2.5e-4").value() == 2.5e-4);
  CHECK_THROWS_AS(parse_dt("0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_dt("-1"), std::invalid_argument);
  CHECK_THROWS(parse_dt("fast"));

  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RunConfig{};
  c.tol = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  const fs::path dir = scratch("config");
  std::ofstream(dir / "ok.json") << R"({"model": "builtin:6", "strategy": "pod", "dt": 1e-4, "eps_pod": 1e-3,
    "integrator": "implicit", "tol": 1e-9})";
  RunConfig f;
  apply_config_file(f, dir / "ok.json");
  CHECK(f.model == "builtin:6");
  CHECK(f.strategy == StartStrategyKind::Pod);
  CHECK(f.dt.value() == 1e-4);
  CHECK(f.eps_pod == 1e-3);
  CHECK(f.integrator == Integrator::Implicit);
  CHECK(f.tol == 1e-9);
  std::ofstream(dir / "bad.json") << R"({"modle": "builtin"})";
  CHECK_THROWS(apply_config_file(f, dir / "bad.json"));
  std::ofstream(dir / "auto.json") << R"({"dt": "auto"})";
  apply_config_file(f, dir / "auto.json");
  CHECK_FALSE(f.dt.has_value());
}

TEST_CASE("builtin flux density rises monotonically and matches the implicit reference") {
  RunConfig c;
  c.model = "builtin:6";
  const AssembledModel m = load_model_source(c.model);
  const TransientResult ex = run_model(c, m);
  c.integrator = Integrator::Implicit;
  const TransientResult im = run_model(c, m);
  REQUIRE(ex.complete);
  REQUIRE(im.complete);
  CHECK(ex.rows.size() == 120);
  for (std::size_t k = 1; k < ex.rows.size(); ++k) CHECK(ex.rows[k].b_probe >= ex.rows[k - 1].b_probe);
  const TraceDifference d = compare_traces(ex, im);
  CHECK(d.common_rows == 120);
  CHECK(d.rel_l2 <= 0.05);
}

TEST_CASE("bench output is deterministic") {
  RunConfig c = short_run();
  c.t_end = 0.01;
  c.implicit_dt = 1e-3;
  const AssembledModel m = load_model_source(c.model);
  const fs::path d1 = scratch("bench1"), d2 = scratch("bench2");
  const BenchmarkSummary s1 = run_bench(c, m);
  write_bench(s1, d1);
  write_bench(run_bench(c, m), d2);
  for (const char* f : {"summary.csv", "bench.json", "trace_previous.csv", "trace_pod.csv", "trace_cspe.csv",
                        "trace_implicit.csv"}) {
    REQUIRE(fs::exists(d1 / f));
    CHECK_MESSAGE(slurp(d1 / f) == slurp(d2 / f), f);
  }
  CHECK(fs::exists(d1 / "timing.json"));
  REQUIRE(s1.strategies.size() == 3);
  for (const auto& s : s1.strategies) {
    CHECK(s.result.steps == s1.steps);
    CHECK(s.result.dt == doctest::Approx(s1.dt));
  }
  CHECK(format_bench_table(s1).find("cspe") != std::string::npos);
}
