#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mqs/model/fit_grid.hpp"
#include "mqs/model/reluctivity.hpp"
#include "mqs/schur/partitioned_system.hpp"
#include "mqs/schur/transient_result.hpp"

namespace mqs {

enum class Region : std::uint8_t { Air, Conductor, Coil };

struct GridSpec {
  std::size_t nx = 0, ny = 0, nz = 0;
  double h = 0.0;
  std::vector<Region> cells;  // lexicographic, i fastest

  std::size_t cell_count() const { return nx * ny * nz; }
  FitGrid topology() const { return FitGrid(nx, ny, nz, h); }
};

struct Material {
  double kappa = 0.0;  // S/m
  BrauerCurve curve{};
};

/// Current path through grid nodes given by its corners (i, j, k);
/// consecutive corners must share two coordinates. A closed loop repeats
/// its first corner at the end; assembly rejects open paths.
struct CoilLoop {
  std::vector<std::array<std::size_t, 3>> corners;
  double ampere_turns = 1.0;
};

struct Excitation {
  std::vector<CoilLoop> loops;
  Waveform waveform{};
};

struct ModelSpec {
  GridSpec grid;
  Material conductor;  // all Conductor cells; Air and Coil cells are vacuum
  Excitation excitation;
  std::vector<std::size_t> probe_cells;
};

/// Global edge -> unknown mapping. Boundary edges are eliminated; an interior
/// edge is conducting iff it touches a conductor cell.
struct DofMap {
  std::size_t num_edges = 0;
  std::vector<std::size_t> conducting;     // global edge ids, ascending
  std::vector<std::size_t> nonconducting;  // global edge ids, ascending

  // index into conducting / nonconducting, kDropped for eliminated edges
  std::vector<std::size_t> c_index() const;
  std::vector<std::size_t> n_index() const;
  /// Scatter (a_c, a_n) into a global edge vector, zero on the boundary.
  Vector scatter(std::span<const double> a_c, std::span<const double> a_n) const;
  /// Restrict a global edge vector to the nonconducting unknowns.
  Vector gather_n(std::span<const double> edge_values) const;
};

struct AssembledModel {
  PartitionedSystem system;
  GridSpec grid;
  DofMap dofs;
  std::vector<std::size_t> probe_cells;

  /// Probe |B| over probe_cells; without a grid, the RMS of a_c.
  Probe probe() const;
};

/// Per-face reluctance weights nu_f / h for a cell-wise reluctivity, the
/// missing neighbour of an outer face counting as vacuum.
Vector face_weights(const FitGrid& grid, std::span<const double> cell_nu);

/// Full curl-curl matrix C^T diag(w) C over all edges.
CsrMatrix curl_curl(const FitGrid& grid, std::span<const double> face_w);

/// Edge currents of one loop over all edges of the grid.
Vector loop_current(const FitGrid& grid, const CoilLoop& loop);

/// Average |B| over cells; B per cell from the mean flux of opposite faces.
double probe_b(const FitGrid& grid, std::span<const double> edge_values, std::span<const std::size_t> cells);

/// Builds M_c, K_c(.), K_cn, K_n and the source; throws ModelError for an
/// empty or disconnected conductor, broken coil loops, or a grid below 8 cells.
AssembledModel assemble(const ModelSpec& spec);

}  // namespace mqs
