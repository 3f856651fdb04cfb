#include "mqs/model/assemble.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

#include "mqs/errors.hpp"

namespace mqs {

std::vector<std::size_t> DofMap::c_index() const {
  std::vector<std::size_t> map(num_edges, kDropped);
  for (std::size_t i = 0; i < conducting.size(); ++i) map[conducting[i]] = i;
  return map;
}

std::vector<std::size_t> DofMap::n_index() const {
  std::vector<std::size_t> map(num_edges, kDropped);
  for (std::size_t i = 0; i < nonconducting.size(); ++i) map[nonconducting[i]] = i;
  return map;
}

Vector DofMap::scatter(std::span<const double> a_c, std::span<const double> a_n) const {
  if (a_c.size() != conducting.size() || a_n.size() != nonconducting.size())
    throw std::invalid_argument("DofMap::scatter: dimension mismatch");
  Vector out(num_edges, 0.0);
  for (std::size_t i = 0; i < a_c.size(); ++i) out[conducting[i]] = a_c[i];
  for (std::size_t i = 0; i < a_n.size(); ++i) out[nonconducting[i]] = a_n[i];
  return out;
}

Vector DofMap::gather_n(std::span<const double> edge_values) const {
  if (edge_values.size() != num_edges) throw std::invalid_argument("DofMap::gather_n: dimension mismatch");
  Vector out(nonconducting.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = edge_values[nonconducting[i]];
  return out;
}

Probe AssembledModel::probe() const {
  if (grid.nx == 0 || probe_cells.empty()) {
    // no geometry: fall back to the RMS of the conducting unknowns
    return [](std::span<const double> a_c, std::span<const double>) {
      return a_c.empty() ? 0.0 : norm2(a_c) / std::sqrt(static_cast<double>(a_c.size()));
    };
  }
  const FitGrid topo = grid.topology();
  return [topo, dofs = dofs, cells = probe_cells](std::span<const double> a_c, std::span<const double> a_n) {
    return probe_b(topo, dofs.scatter(a_c, a_n), cells);
  };
}

Vector face_weights(const FitGrid& grid, std::span<const double> cell_nu) {
  if (cell_nu.size() != grid.num_cells()) throw std::invalid_argument("face_weights: one value per cell expected");
  Vector w(grid.num_faces());
  for (std::size_t f = 0; f < w.size(); ++f) {
    const auto cells = grid.face_cells(f);
    double sum = 0.0;
    for (std::size_t c : cells) sum += c == kDropped ? kNuVacuum : cell_nu[c];
    w[f] = sum / (2.0 * grid.h());
  }
  return w;
}

CsrMatrix curl_curl(const FitGrid& grid, std::span<const double> face_w) {
  const CsrMatrix c = grid.curl();
  if (face_w.size() != c.nrows()) throw std::invalid_argument("curl_curl: one weight per face expected");
  auto t = c.triplets();
  for (auto& e : t) e.value *= face_w[e.row];
  const CsrMatrix wc = CsrMatrix::from_triplets(c.nrows(), c.ncols(), std::move(t));
  return multiply(c.transpose(), wc);
}

Vector loop_current(const FitGrid& grid, const CoilLoop& loop) {
  if (loop.corners.size() < 2) throw ModelError("coil path needs at least two corners");
  Vector j(grid.num_edges(), 0.0);
  for (std::size_t s = 0; s + 1 < loop.corners.size(); ++s) {
    auto a = loop.corners[s];
    const auto& b = loop.corners[s + 1];
    int dir = -1;
    for (int d = 0; d < 3; ++d)
      if (a[static_cast<std::size_t>(d)] != b[static_cast<std::size_t>(d)]) {
        if (dir != -1) throw ModelError("coil loop segment is not axis-aligned");
        dir = d;
      }
    if (dir < 0) throw ModelError("coil loop has repeated corner");
    for (std::size_t d = 0; d < 3; ++d)
      if (a[d] > (d == 0 ? grid.nx() : d == 1 ? grid.ny() : grid.nz()) ||
          b[d] > (d == 0 ? grid.nx() : d == 1 ? grid.ny() : grid.nz()))
        throw ModelError("coil loop corner outside the grid");
    const auto ud = static_cast<std::size_t>(dir);
    while (a[ud] != b[ud]) {
      auto next = a;
      next[ud] = a[ud] < b[ud] ? a[ud] + 1 : a[ud] - 1;
      const auto [e, sign] = grid.edge_between(grid.node(a[0], a[1], a[2]), grid.node(next[0], next[1], next[2]));
      j[e] += sign * loop.ampere_turns;
      a = next;
    }
  }
  return j;
}

double probe_b(const FitGrid& grid, std::span<const double> edge_values, std::span<const std::size_t> cells) {
  if (cells.empty()) throw std::invalid_argument("probe_b: empty probe");
  const Vector flux = spmv(grid.curl(), edge_values);
  const double h2 = grid.h() * grid.h();
  double sum = 0.0;
  for (std::size_t c : cells) {
    if (c >= grid.num_cells()) throw std::invalid_argument("probe_b: probe cell out of range");
    const auto f = grid.cell_faces(c);
    double b2 = 0.0;
    for (std::size_t d = 0; d < 3; ++d) {
      const double b = 0.5 * (flux[f[2 * d]] + flux[f[2 * d + 1]]) / h2;
      b2 += b * b;
    }
    sum += std::sqrt(b2);
  }
  return sum / static_cast<double>(cells.size());
}

namespace {

void check_conductor_connected(const GridSpec& g) {
  std::vector<std::size_t> cond;
  for (std::size_t c = 0; c < g.cells.size(); ++c)
    if (g.cells[c] == Region::Conductor) cond.push_back(c);
  if (cond.empty()) throw ModelError("model has no conducting region (n_c = 0)");
  std::vector<char> seen(g.cells.size(), 0);
  std::queue<std::size_t> q;
  q.push(cond.front());
  seen[cond.front()] = 1;
  std::size_t reached = 0;
  while (!q.empty()) {
    const std::size_t c = q.front();
    q.pop();
    ++reached;
    const std::size_t i = c % g.nx, j = (c / g.nx) % g.ny, k = c / (g.nx * g.ny);
    const std::array<std::array<long, 3>, 6> nb{{{-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1}}};
    for (const auto& d : nb) {
      const long ii = static_cast<long>(i) + d[0], jj = static_cast<long>(j) + d[1], kk = static_cast<long>(k) + d[2];
      if (ii < 0 || jj < 0 || kk < 0 || ii >= static_cast<long>(g.nx) || jj >= static_cast<long>(g.ny) ||
          kk >= static_cast<long>(g.nz))
        continue;
      const std::size_t n = static_cast<std::size_t>(ii) +
                            g.nx * (static_cast<std::size_t>(jj) + g.ny * static_cast<std::size_t>(kk));
      if (!seen[n] && g.cells[n] == Region::Conductor) {
        seen[n] = 1;
        q.push(n);
      }
    }
  }
  if (reached != cond.size()) throw ModelError("conductor region is not face-connected");
}

}  // namespace

AssembledModel assemble(const ModelSpec& spec) {
  const GridSpec& g = spec.grid;
  if (g.nx == 0 || g.ny == 0 || g.nz == 0 || g.cell_count() < 8)
    throw ModelError("grid must have at least 8 cells");
  if (!(g.h > 0.0)) throw ModelError("cell size must be positive");
  if (g.cells.size() != g.cell_count()) throw ModelError("region map size does not match the grid");
  if (!(spec.conductor.kappa > 0.0)) throw ModelError("conductivity must be positive (n_c = 0)");
  spec.conductor.curve.validate();
  spec.excitation.waveform.validate();
  check_conductor_connected(g);
  if (spec.excitation.loops.empty()) throw ModelError("excitation has no coil loop");

  const FitGrid grid = g.topology();
  const std::size_t ne = grid.num_edges();

  DofMap dofs;
  dofs.num_edges = ne;
  Vector kappa_edge(ne, 0.0);
  for (std::size_t e = 0; e < ne; ++e) {
    if (grid.boundary_edge(e)) continue;
    bool conducting = false;
    double kappa_sum = 0.0;
    for (std::size_t c : grid.edge_cells(e)) {
      if (c == kDropped) continue;
      if (g.cells[c] == Region::Conductor) {
        conducting = true;
        kappa_sum += spec.conductor.kappa;
      }
    }
    if (conducting) {
      dofs.conducting.push_back(e);
      kappa_edge[e] = kappa_sum / 4.0;
    } else {
      dofs.nonconducting.push_back(e);
    }
  }
  const auto c_idx = dofs.c_index();
  const auto n_idx = dofs.n_index();
  const std::size_t nc = dofs.conducting.size(), nn = dofs.nonconducting.size();

  // Vacuum part: each face carries nu0 / (2h) per adjacent non-conductor cell.
  const double h = g.h;
  Vector w_air(grid.num_faces(), 0.0);
  for (std::size_t f = 0; f < w_air.size(); ++f)
    for (std::size_t c : grid.face_cells(f))
      if (c != kDropped && g.cells[c] != Region::Conductor) w_air[f] += kNuVacuum / (2.0 * h);
  const CsrMatrix k_air = curl_curl(grid, w_air);

  // Saturable part: faces of conductor cells, restricted to conducting edges.
  const CsrMatrix curl = grid.curl();
  std::vector<std::size_t> face_idx(grid.num_faces(), kDropped);
  std::vector<std::size_t> cond_cells;
  std::size_t nf = 0;
  for (std::size_t c = 0; c < g.cells.size(); ++c) {
    if (g.cells[c] != Region::Conductor) continue;
    cond_cells.push_back(c);
    for (std::size_t f : grid.cell_faces(c))
      if (face_idx[f] == kDropped) face_idx[f] = nf++;
  }
  const CsrMatrix face_curl = extract_block(curl, face_idx, nf, c_idx, nc);
  std::vector<Triplet> pt;
  for (std::size_t r = 0; r < cond_cells.size(); ++r)
    for (std::size_t f : grid.cell_faces(cond_cells[r])) pt.push_back({r, face_idx[f], 1.0});
  CsrMatrix cell_faces = CsrMatrix::from_triplets(cond_cells.size(), nf, std::move(pt));

  // Faces of conductor cells whose edges include eliminated boundary edges
  // lose those columns; curl rows of conductor faces never touch
  // nonconducting edges since every edge of such a face borders the cell.

  AssembledModel out;
  std::vector<Triplet> mt;
  for (std::size_t i = 0; i < nc; ++i) mt.push_back({i, i, kappa_edge[dofs.conducting[i]] * h});
  out.system.mass_c = CsrMatrix::from_triplets(nc, nc, std::move(mt));
  out.system.stiffness_c = ConductingStiffness(extract_block(k_air, c_idx, nc, c_idx, nc), face_curl,
                                               std::move(cell_faces), h, spec.conductor.curve);
  out.system.coupling = extract_block(k_air, c_idx, nc, n_idx, nn);
  out.system.stiffness_n = extract_block(k_air, n_idx, nn, n_idx, nn);

  Vector j_edges(ne, 0.0);
  for (const auto& loop : spec.excitation.loops) axpy(1.0, loop_current(grid, loop), j_edges);
  for (std::size_t e = 0; e < ne; ++e) {
    if (j_edges[e] == 0.0) continue;
    if (grid.boundary_edge(e)) throw ModelError("coil loop runs along the outer boundary");
    if (c_idx[e] != kDropped) throw ModelError("coil loop touches the conducting region");
  }
  // Closedness: the discrete divergence G^T j must vanish at every node.
  const Vector div = spmv_transpose(grid.gradient(), j_edges);
  double jmax = 0.0;
  for (double v : j_edges) jmax = std::max(jmax, std::abs(v));
  for (double v : div)
    if (std::abs(v) > 1e-12 * jmax) throw ModelError("coil loop is not closed");
  out.system.source = Source{dofs.gather_n(j_edges), spec.excitation.waveform};

  if (nc == 0) throw ModelError("model has no conducting edges (n_c = 0)");
  out.system.validate();
  out.grid = g;
  out.dofs = std::move(dofs);
  out.probe_cells = spec.probe_cells;
  for (std::size_t c : out.probe_cells)
    if (c >= g.cell_count()) throw ModelError("probe cell out of range");
  return out;
}

}  // namespace mqs
