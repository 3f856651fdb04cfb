#include "mqs/model/builtin.hpp"

#include <algorithm>
#include <string>

#include "mqs/errors.hpp"

namespace mqs {

ModelSpec builtin_spec(std::size_t n, const BuiltinOptions& options) {
  if (n < 6) throw ModelError("builtin model needs at least 6 cells per direction, got " + std::to_string(n));
  ModelSpec spec;
  GridSpec& g = spec.grid;
  g.nx = g.ny = g.nz = n;
  g.h = options.length / static_cast<double>(n);
  g.cells.assign(n * n * n, Region::Air);

  const std::size_t w = std::max<std::size_t>(1, n / 8);
  const std::size_t x_lo = n / 4, x_hi = n - n / 4;
  const std::size_t lo = n / 2 - w, hi = n / 2 + w;  // bar cells [lo, hi) in y and z
  auto cell = [n](std::size_t i, std::size_t j, std::size_t k) { return i + n * (j + n * k); };
  for (std::size_t k = lo; k < hi; ++k)
    for (std::size_t j = lo; j < hi; ++j)
      for (std::size_t i = x_lo; i < x_hi; ++i) g.cells[cell(i, j, k)] = Region::Conductor;

  // One turn per interior node plane of the bar, on the node ring one cell
  // outside the bar surface.
  std::vector<std::size_t> planes;
  for (std::size_t i = x_lo + 1; i < x_hi; ++i) planes.push_back(i);
  const double per_turn = options.ampere_turns / static_cast<double>(planes.size());
  const std::size_t a = lo - 1, b = hi + 1;
  for (std::size_t i : planes) {
    CoilLoop loop;
    loop.corners = {{i, a, a}, {i, b, a}, {i, b, b}, {i, a, b}, {i, a, a}};
    loop.ampere_turns = per_turn;
    spec.excitation.loops.push_back(std::move(loop));
  }
  spec.conductor.kappa = options.kappa;
  spec.conductor.curve = options.curve;
  spec.excitation.waveform = options.waveform;

  const std::size_t mid = n / 2;
  for (std::size_t k = lo; k < hi; ++k)
    for (std::size_t j = lo; j < hi; ++j) spec.probe_cells.push_back(cell(mid, j, k));
  return spec;
}

AssembledModel builtin_model(std::size_t n, const BuiltinOptions& options) {
  return assemble(builtin_spec(n, options));
}

}  // namespace mqs
