#pragma once

#include <array>
#include <cstddef>
#include <utility>

#include "mqs/sparse/csr_matrix.hpp"

namespace mqs {

/// Topology of a structured hexahedral grid with nx x ny x nz cells of edge
/// length h. Nodes, edges, faces and cells are numbered lexicographically
/// (i fastest); edges and faces are grouped by direction x, y, z.
class FitGrid {
 public:
  FitGrid(std::size_t nx, std::size_t ny, std::size_t nz, double h);

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t nz() const { return nz_; }
  double h() const { return h_; }

  std::size_t num_nodes() const { return (nx_ + 1) * (ny_ + 1) * (nz_ + 1); }
  std::size_t num_edges() const { return n_ex_ + n_ey_ + n_ez_; }
  std::size_t num_faces() const { return n_fx_ + n_fy_ + n_fz_; }
  std::size_t num_cells() const { return nx_ * ny_ * nz_; }

  std::size_t node(std::size_t i, std::size_t j, std::size_t k) const;
  std::size_t cell(std::size_t i, std::size_t j, std::size_t k) const;
  // edge along `dir` (0 = x, 1 = y, 2 = z) starting at node (i, j, k)
  std::size_t edge(int dir, std::size_t i, std::size_t j, std::size_t k) const;
  // face normal to `dir` with lowest corner at node (i, j, k)
  std::size_t face(int dir, std::size_t i, std::size_t j, std::size_t k) const;

  std::array<std::size_t, 3> node_coords(std::size_t n) const;
  std::array<std::size_t, 3> cell_coords(std::size_t c) const;
  /// (direction, i, j, k) of an edge / face.
  std::pair<int, std::array<std::size_t, 3>> edge_coords(std::size_t e) const;
  std::pair<int, std::array<std::size_t, 3>> face_coords(std::size_t f) const;

  std::pair<std::size_t, std::size_t> edge_nodes(std::size_t e) const;  // (tail, head)
  /// Edge joining two neighbouring nodes and +1/-1 for its orientation
  /// relative to a -> b. Throws if the nodes are not neighbours.
  std::pair<std::size_t, double> edge_between(std::size_t a, std::size_t b) const;

  bool boundary_node(std::size_t n) const;
  bool boundary_edge(std::size_t e) const;

  /// Up to four cells touching an edge (fewer on the outer boundary);
  /// unused slots hold kDropped.
  std::array<std::size_t, 4> edge_cells(std::size_t e) const;
  /// The one or two cells sharing a face; unused slot holds kDropped.
  std::array<std::size_t, 2> face_cells(std::size_t f) const;
  /// Faces -x, +x, -y, +y, -z, +z of a cell.
  std::array<std::size_t, 6> cell_faces(std::size_t c) const;

  /// Discrete curl (faces x edges): circulation of each face in the
  /// right-handed sense of its normal.
  CsrMatrix curl() const;
  /// Discrete gradient (edges x nodes): head minus tail. curl() * gradient() = 0.
  CsrMatrix gradient() const;

 private:
  std::size_t nx_, ny_, nz_;
  double h_;
  std::size_t n_ex_, n_ey_, n_ez_;
  std::size_t n_fx_, n_fy_, n_fz_;
};

}  // namespace mqs
