#pragma once

#include <cstddef>

#include "mqs/model/assemble.hpp"

namespace mqs {

struct BuiltinOptions {
  double length = 0.1;           // edge of the cubic domain, m
  double kappa = 2.0e6;          // bar conductivity, S/m
  double ampere_turns = 1.0e5;  // total coil excitation at i_S = 1
  BrauerCurve curve{};
  Waveform waveform{};
};

/// Conducting saturable bar along x through an n^3 air box, wound by a
/// rectangular multi-turn coil one cell away from its surface. The probe is
/// the bar cross-section at mid-length. Requires n >= 6.
ModelSpec builtin_spec(std::size_t n, const BuiltinOptions& options = {});
AssembledModel builtin_model(std::size_t n, const BuiltinOptions& options = {});

}  // namespace mqs
