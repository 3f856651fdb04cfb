#pragma once

#include <string>
#include <string_view>

#include "mqs/schur/conducting_stiffness.hpp"
#include "mqs/sparse/csr_matrix.hpp"

namespace mqs {

/// Time dependence i_S(t) of the source current.
struct Waveform {
  enum class Shape { ExpRise, Constant };

  Shape shape = Shape::ExpRise;
  double tau = 0.5;  // seconds, ExpRise only
  double amplitude = 1.0;

  /// ExpRise: amplitude * (1 - exp(-t / tau)); Constant: amplitude.
  double operator()(double t) const;
  void validate() const;
  friend bool operator==(const Waveform&, const Waveform&) = default;
};

std::string_view to_string(Waveform::Shape shape);
Waveform::Shape parse_waveform_shape(std::string_view name);

/// j_sn(t) = pattern * i_S(t).
struct Source {
  Vector pattern;
  Waveform waveform;

  Vector at(double t) const;
  friend bool operator==(const Source&, const Source&) = default;
};

/// Blocks of the semidiscrete eddy-current DAE
///
///   [M_c 0] d/dt [a_c]   [K_c(a_c)  K_cn] [a_c]   [  0  ]
///   [ 0  0]      [a_n] + [K_cn^T    K_n ] [a_n] = [j_sn ]
///
/// K_n is symmetric positive semidefinite (singular curl-curl) and j_sn(t)
/// must lie in its range.
struct PartitionedSystem {
  CsrMatrix mass_c;
  ConductingStiffness stiffness_c;
  CsrMatrix coupling;     // n_c x n_n
  CsrMatrix stiffness_n;  // n_n x n_n
  Source source;

  std::size_t n_c() const { return mass_c.nrows(); }
  std::size_t n_n() const { return stiffness_n.nrows(); }

  /// Dimension, symmetry and positivity checks; throws ModelError naming
  /// the offending block. `rel_sym_tol` is relative to the block's max entry.
  void validate(double rel_sym_tol = 1e-12) const;

  friend bool operator==(const PartitionedSystem&, const PartitionedSystem&) = default;
};

}  // namespace mqs
