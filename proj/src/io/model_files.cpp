#include "mqs/io/model_files.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>

#include "mqs/errors.hpp"
#include "mqs/model/builtin.hpp"
#include "mqs/sparse/matrix_market.hpp"

namespace mqs {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kFormat = "mqs-model";
constexpr int kVersion = 1;

CsrMatrix column(std::span<const double> v) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) t.push_back({i, 0, v[i]});
  return CsrMatrix::from_triplets(v.size(), 1, std::move(t));
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ModelError("manifest: missing " + where + key);
  return obj.at(key);
}

CsrMatrix read_block(const fs::path& dir, const json& blocks, const char* name) {
  const json& entry = require(blocks, name, "block ");
  const fs::path p = dir / entry.get<std::string>();
  if (!fs::exists(p)) throw ModelError("block " + std::string(name) + ": file not found: " + p.string());
  try {
    return read_matrix_market(p);
  } catch (const ModelError& e) {
    throw ModelError("block " + std::string(name) + ": " + e.what());
  }
}

void expect_dims(const CsrMatrix& a, std::size_t r, std::size_t c, const char* name) {
  if (a.nrows() != r || a.ncols() != c)
    throw ModelError("block " + std::string(name) + ": expected " + std::to_string(r) + "x" + std::to_string(c) +
                     ", got " + std::to_string(a.nrows()) + "x" + std::to_string(a.ncols()));
}

}  // namespace

void save_model(const AssembledModel& model, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ModelError("cannot create model directory " + dir.string() + ": " + ec.message());
  const PartitionedSystem& s = model.system;

  write_matrix_market(dir / "M_c.mtx", s.mass_c, MatrixMarketSymmetry::Symmetric);
  write_matrix_market(dir / "K_c.mtx", s.stiffness_c.linear_part(), MatrixMarketSymmetry::Symmetric);
  write_matrix_market(dir / "K_cn.mtx", s.coupling);
  write_matrix_market(dir / "K_n.mtx", s.stiffness_n, MatrixMarketSymmetry::Symmetric);
  write_matrix_market(dir / "X_s.mtx", column(s.source.pattern));

  json m;
  m["format"] = kFormat;
  m["version"] = kVersion;
  m["blocks"] = {{"M_c", "M_c.mtx"}, {"K_c", "K_c.mtx"}, {"K_cn", "K_cn.mtx"}, {"K_n", "K_n.mtx"}, {"X_s", "X_s.mtx"}};
  m["dims"] = {{"n_c", s.n_c()}, {"n_n", s.n_n()}};
  m["partition"] = {{"num_edges", model.dofs.num_edges},
                    {"conducting", model.dofs.conducting},
                    {"nonconducting", model.dofs.nonconducting}};
  m["waveform"] = {{"shape", std::string(to_string(s.source.waveform.shape))},
                   {"tau", s.source.waveform.tau},
                   {"amplitude", s.source.waveform.amplitude}};
  if (s.stiffness_c.has_saturable_part()) {
    write_matrix_market(dir / "C_c.mtx", s.stiffness_c.face_curl());
    write_matrix_market(dir / "cell_faces.mtx", s.stiffness_c.cell_faces());
    const BrauerCurve& b = s.stiffness_c.curve();
    m["saturable"] = {{"face_curl", "C_c.mtx"},
                      {"cell_faces", "cell_faces.mtx"},
                      {"cell_size", s.stiffness_c.cell_size()},
                      {"brauer", {{"k1", b.k1}, {"k2", b.k2}, {"k3", b.k3}}}};
  }
  if (model.grid.nx > 0)
    m["grid"] = {{"nx", model.grid.nx}, {"ny", model.grid.ny}, {"nz", model.grid.nz}, {"h", model.grid.h}};
  m["probe_cells"] = model.probe_cells;

  std::ofstream out(dir / "manifest.json");
  if (!out) throw ModelError("cannot write " + (dir / "manifest.json").string());
  out << m.dump(2) << '\n';
}

AssembledModel load_system(const fs::path& manifest_or_dir) {
  const fs::path manifest = fs::is_directory(manifest_or_dir) ? manifest_or_dir / "manifest.json" : manifest_or_dir;
  const fs::path dir = manifest.parent_path();
  std::ifstream in(manifest);
  if (!in) throw ModelError("cannot open manifest " + manifest.string());
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw ModelError("manifest " + manifest.string() + ": " + e.what());
  }

  AssembledModel model;
  try {
    if (require(m, "format", "").get<std::string>() != kFormat) throw ModelError("manifest: unknown format");
    if (require(m, "version", "").get<int>() != kVersion) throw ModelError("manifest: unsupported version");
    const json& blocks = require(m, "blocks", "");
    CsrMatrix mass = read_block(dir, blocks, "M_c");
    CsrMatrix kc = read_block(dir, blocks, "K_c");
    CsrMatrix kcn = read_block(dir, blocks, "K_cn");
    CsrMatrix kn = read_block(dir, blocks, "K_n");
    CsrMatrix xs = read_block(dir, blocks, "X_s");

    const json& dims = require(m, "dims", "");
    const auto nc = require(dims, "n_c", "dims.").get<std::size_t>();
    const auto nn = require(dims, "n_n", "dims.").get<std::size_t>();
    expect_dims(mass, nc, nc, "M_c");
    expect_dims(kc, nc, nc, "K_c");
    expect_dims(kcn, nc, nn, "K_cn");
    expect_dims(kn, nn, nn, "K_n");
    expect_dims(xs, nn, 1, "X_s");

    const json& part = require(m, "partition", "");
    model.dofs.num_edges = require(part, "num_edges", "partition.").get<std::size_t>();
    model.dofs.conducting = require(part, "conducting", "partition.").get<std::vector<std::size_t>>();
    model.dofs.nonconducting = require(part, "nonconducting", "partition.").get<std::vector<std::size_t>>();
    if (model.dofs.conducting.size() != nc || model.dofs.nonconducting.size() != nn)
      throw ModelError("partition: sizes do not match dims");
    std::vector<char> used(model.dofs.num_edges, 0);
    for (const auto* list : {&model.dofs.conducting, &model.dofs.nonconducting})
      for (std::size_t e : *list) {
        if (e >= model.dofs.num_edges || used[e]) throw ModelError("partition: invalid or repeated edge id");
        used[e] = 1;
      }

    const json& wf = require(m, "waveform", "");
    Waveform waveform;
    waveform.shape = parse_waveform_shape(require(wf, "shape", "waveform.").get<std::string>());
    waveform.tau = wf.value("tau", waveform.tau);
    waveform.amplitude = wf.value("amplitude", waveform.amplitude);

    Vector pattern(nn, 0.0);
    for (const auto& t : xs.triplets()) pattern[t.row] = t.value;

    PartitionedSystem& s = model.system;
    s.mass_c = std::move(mass);
    s.coupling = std::move(kcn);
    s.stiffness_n = std::move(kn);
    s.source = Source{std::move(pattern), waveform};
    if (m.contains("saturable")) {
      const json& sat = m.at("saturable");
      CsrMatrix fc = read_block(dir, sat, "face_curl");
      CsrMatrix cf = read_block(dir, sat, "cell_faces");
      if (fc.ncols() != nc) throw ModelError("block face_curl: column count must equal n_c");
      if (cf.ncols() != fc.nrows()) throw ModelError("block cell_faces: column count must equal face count");
      const json& br = require(sat, "brauer", "saturable.");
      BrauerCurve curve{require(br, "k1", "brauer.").get<double>(), require(br, "k2", "brauer.").get<double>(),
                        require(br, "k3", "brauer.").get<double>()};
      s.stiffness_c = ConductingStiffness(std::move(kc), std::move(fc), std::move(cf),
                                          require(sat, "cell_size", "saturable.").get<double>(), curve);
    } else {
      s.stiffness_c = ConductingStiffness(std::move(kc));
    }

    if (m.contains("grid")) {
      const json& g = m.at("grid");
      model.grid.nx = g.at("nx").get<std::size_t>();
      model.grid.ny = g.at("ny").get<std::size_t>();
      model.grid.nz = g.at("nz").get<std::size_t>();
      model.grid.h = g.at("h").get<double>();
      const FitGrid topo = model.grid.topology();
      if (topo.num_edges() != model.dofs.num_edges) throw ModelError("grid: edge count does not match partition");
    }
    model.probe_cells = m.value("probe_cells", std::vector<std::size_t>{});
    if (model.grid.nx > 0)
      for (std::size_t c : model.probe_cells)
        if (c >= model.grid.cell_count()) throw ModelError("probe_cells: cell out of range");
  } catch (const json::exception& e) {
    throw ModelError("manifest " + manifest.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ModelError(std::string("manifest: ") + e.what());
  }

  model.system.validate();

  if (model.grid.nx > 0) {
    // Coil current must be divergence-free on the grid to lie in range(K_n).
    const FitGrid topo = model.grid.topology();
    const Vector j = model.dofs.scatter(Vector(model.system.n_c(), 0.0), model.system.source.pattern);
    const Vector div = spmv_transpose(topo.gradient(), j);
    double jmax = 0.0, dmax = 0.0;
    for (double v : j) jmax = std::max(jmax, std::abs(v));
    for (double v : div) dmax = std::max(dmax, std::abs(v));
    if (dmax > 1e-10 * jmax) throw ModelError("block X_s: source current is not divergence-free");
  }
  return model;
}

AssembledModel load_model_source(const std::string& source) {
  const std::string prefix = "builtin";
  if (source == prefix || source.rfind(prefix + ":", 0) == 0) {
    std::size_t n = 8;
    if (source.size() > prefix.size()) {
      const std::string num = source.substr(prefix.size() + 1);
      std::size_t pos = 0;
      try {
        n = std::stoul(num, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == 0 || pos != num.size()) throw ModelError("model: bad cell count in " + source);
    }
    return builtin_model(n);
  }
  return load_system(source);
}

}  // namespace mqs
