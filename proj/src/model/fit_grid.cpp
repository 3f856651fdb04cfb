#include "mqs/model/fit_grid.hpp"

#include <stdexcept>

namespace mqs {

FitGrid::FitGrid(std::size_t nx, std::size_t ny, std::size_t nz, double h) : nx_(nx), ny_(ny), nz_(nz), h_(h) {
  if (nx == 0 || ny == 0 || nz == 0) throw std::invalid_argument("FitGrid: cell counts must be positive");
  if (!(h > 0.0)) throw std::invalid_argument("FitGrid: cell size must be positive");
  n_ex_ = nx * (ny + 1) * (nz + 1);
  n_ey_ = (nx + 1) * ny * (nz + 1);
  n_ez_ = (nx + 1) * (ny + 1) * nz;
  n_fx_ = (nx + 1) * ny * nz;
  n_fy_ = nx * (ny + 1) * nz;
  n_fz_ = nx * ny * (nz + 1);
}

std::size_t FitGrid::node(std::size_t i, std::size_t j, std::size_t k) const {
  return i + (nx_ + 1) * (j + (ny_ + 1) * k);
}

std::size_t FitGrid::cell(std::size_t i, std::size_t j, std::size_t k) const { return i + nx_ * (j + ny_ * k); }

std::size_t FitGrid::edge(int dir, std::size_t i, std::size_t j, std::size_t k) const {
  switch (dir) {
    case 0: return i + nx_ * (j + (ny_ + 1) * k);
    case 1: return n_ex_ + i + (nx_ + 1) * (j + ny_ * k);
    case 2: return n_ex_ + n_ey_ + i + (nx_ + 1) * (j + (ny_ + 1) * k);
  }
  throw std::invalid_argument("FitGrid::edge: bad direction");
}

std::size_t FitGrid::face(int dir, std::size_t i, std::size_t j, std::size_t k) const {
  switch (dir) {
    case 0: return i + (nx_ + 1) * (j + ny_ * k);
    case 1: return n_fx_ + i + nx_ * (j + (ny_ + 1) * k);
    case 2: return n_fx_ + n_fy_ + i + nx_ * (j + ny_ * k);
  }
  throw std::invalid_argument("FitGrid::face: bad direction");
}

std::array<std::size_t, 3> FitGrid::node_coords(std::size_t n) const {
  const std::size_t sx = nx_ + 1, sy = ny_ + 1;
  return {n % sx, (n / sx) % sy, n / (sx * sy)};
}

std::array<std::size_t, 3> FitGrid::cell_coords(std::size_t c) const {
  return {c % nx_, (c / nx_) % ny_, c / (nx_ * ny_)};
}

namespace {

std::array<std::size_t, 3> unflatten(std::size_t idx, std::size_t sx, std::size_t sy) {
  return {idx % sx, (idx / sx) % sy, idx / (sx * sy)};
}

}  // namespace

std::pair<int, std::array<std::size_t, 3>> FitGrid::edge_coords(std::size_t e) const {
  if (e < n_ex_) return {0, unflatten(e, nx_, ny_ + 1)};
  e -= n_ex_;
  if (e < n_ey_) return {1, unflatten(e, nx_ + 1, ny_)};
  e -= n_ey_;
  if (e < n_ez_) return {2, unflatten(e, nx_ + 1, ny_ + 1)};
  throw std::out_of_range("FitGrid: edge index out of range");
}

std::pair<int, std::array<std::size_t, 3>> FitGrid::face_coords(std::size_t f) const {
  if (f < n_fx_) return {0, unflatten(f, nx_ + 1, ny_)};
  f -= n_fx_;
  if (f < n_fy_) return {1, unflatten(f, nx_, ny_ + 1)};
  f -= n_fy_;
  if (f < n_fz_) return {2, unflatten(f, nx_, ny_)};
  throw std::out_of_range("FitGrid: face index out of range");
}

std::pair<std::size_t, std::size_t> FitGrid::edge_nodes(std::size_t e) const {
  auto [dir, c] = edge_coords(e);
  auto head = c;
  ++head[static_cast<std::size_t>(dir)];
  return {node(c[0], c[1], c[2]), node(head[0], head[1], head[2])};
}

std::pair<std::size_t, double> FitGrid::edge_between(std::size_t a, std::size_t b) const {
  const auto pa = node_coords(a), pb = node_coords(b);
  int dir = -1;
  for (int d = 0; d < 3; ++d) {
    const auto ud = static_cast<std::size_t>(d);
    if (pa[ud] == pb[ud]) continue;
    const std::size_t lo = std::min(pa[ud], pb[ud]), hi = std::max(pa[ud], pb[ud]);
    if (hi - lo != 1 || dir != -1) throw std::invalid_argument("FitGrid: nodes are not neighbours");
    dir = d;
  }
  if (dir < 0) throw std::invalid_argument("FitGrid: nodes are not neighbours");
  const auto ud = static_cast<std::size_t>(dir);
  const bool forward = pb[ud] > pa[ud];
  const auto& tail = forward ? pa : pb;
  return {edge(dir, tail[0], tail[1], tail[2]), forward ? 1.0 : -1.0};
}

bool FitGrid::boundary_node(std::size_t n) const {
  const auto p = node_coords(n);
  return p[0] == 0 || p[0] == nx_ || p[1] == 0 || p[1] == ny_ || p[2] == 0 || p[2] == nz_;
}

bool FitGrid::boundary_edge(std::size_t e) const {
  // tangential to the outer surface iff a transverse coordinate is extreme
  const auto [dir, c] = edge_coords(e);
  const std::array<std::size_t, 3> n{nx_, ny_, nz_};
  for (std::size_t d = 0; d < 3; ++d) {
    if (d == static_cast<std::size_t>(dir)) continue;
    if (c[d] == 0 || c[d] == n[d]) return true;
  }
  return false;
}

std::array<std::size_t, 4> FitGrid::edge_cells(std::size_t e) const {
  auto [dir, c] = edge_coords(e);
  const std::array<std::size_t, 3> n{nx_, ny_, nz_};
  const auto ud = static_cast<std::size_t>(dir);
  const std::size_t a = (ud + 1) % 3, b = (ud + 2) % 3;
  std::array<std::size_t, 4> out{kDropped, kDropped, kDropped, kDropped};
  std::size_t slot = 0;
  for (int da = -1; da <= 0; ++da)
    for (int db = -1; db <= 0; ++db) {
      if ((da < 0 && c[a] == 0) || (da == 0 && c[a] == n[a])) continue;
      if ((db < 0 && c[b] == 0) || (db == 0 && c[b] == n[b])) continue;
      auto q = c;
      q[a] = c[a] - (da < 0 ? 1 : 0);
      q[b] = c[b] - (db < 0 ? 1 : 0);
      out[slot++] = cell(q[0], q[1], q[2]);
    }
  return out;
}

std::array<std::size_t, 2> FitGrid::face_cells(std::size_t f) const {
  auto [dir, c] = face_coords(f);
  const std::array<std::size_t, 3> n{nx_, ny_, nz_};
  const auto ud = static_cast<std::size_t>(dir);
  std::array<std::size_t, 2> out{kDropped, kDropped};
  std::size_t slot = 0;
  if (c[ud] > 0) {
    auto q = c;
    --q[ud];
    out[slot++] = cell(q[0], q[1], q[2]);
  }
  if (c[ud] < n[ud]) out[slot++] = cell(c[0], c[1], c[2]);
  return out;
}

std::array<std::size_t, 6> FitGrid::cell_faces(std::size_t c) const {
  const auto [i, j, k] = cell_coords(c);
  return {face(0, i, j, k), face(0, i + 1, j, k), face(1, i, j, k),
          face(1, i, j + 1, k), face(2, i, j, k), face(2, i, j, k + 1)};
}

CsrMatrix FitGrid::curl() const {
  std::vector<Triplet> t;
  t.reserve(4 * num_faces());
  for (std::size_t f = 0; f < num_faces(); ++f) {
    const auto [dir, c] = face_coords(f);
    const auto [i, j, k] = c;
    switch (dir) {
      case 0:
        t.push_back({f, edge(1, i, j, k), 1.0});
        t.push_back({f, edge(2, i, j + 1, k), 1.0});
        t.push_back({f, edge(1, i, j, k + 1), -1.0});
        t.push_back({f, edge(2, i, j, k), -1.0});
        break;
      case 1:
        t.push_back({f, edge(2, i, j, k), 1.0});
        t.push_back({f, edge(0, i, j, k + 1), 1.0});
        t.push_back({f, edge(2, i + 1, j, k), -1.0});
        t.push_back({f, edge(0, i, j, k), -1.0});
        break;
      default:
        t.push_back({f, edge(0, i, j, k), 1.0});
        t.push_back({f, edge(1, i + 1, j, k), 1.0});
        t.push_back({f, edge(0, i, j + 1, k), -1.0});
        t.push_back({f, edge(1, i, j, k), -1.0});
        break;
    }
  }
  return CsrMatrix::from_triplets(num_faces(), num_edges(), std::move(t));
}

CsrMatrix FitGrid::gradient() const {
  std::vector<Triplet> t;
  t.reserve(2 * num_edges());
  for (std::size_t e = 0; e < num_edges(); ++e) {
    const auto [tail, head] = edge_nodes(e);
    t.push_back({e, tail, -1.0});
    t.push_back({e, head, 1.0});
  }
  return CsrMatrix::from_triplets(num_edges(), num_nodes(), std::move(t));
}

}  // namespace mqs
