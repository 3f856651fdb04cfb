#include "mqs/schur/partitioned_system.hpp"

#include <cmath>
#include <stdexcept>

#include "mqs/errors.hpp"

namespace mqs {

double Waveform::operator()(double t) const {
  switch (shape) {
    case Shape::ExpRise: return amplitude * -std::expm1(-t / tau);
    case Shape::Constant: return amplitude;
  }
  return 0.0;
}

void Waveform::validate() const {
  if (shape == Shape::ExpRise && !(tau > 0.0)) throw ModelError("waveform: tau must be positive");
  if (!std::isfinite(amplitude)) throw ModelError("waveform: amplitude must be finite");
}

std::string_view to_string(Waveform::Shape shape) {
  switch (shape) {
    case Waveform::Shape::ExpRise: return "exp_rise";
    case Waveform::Shape::Constant: return "constant";
  }
  return "unknown";
}

Waveform::Shape parse_waveform_shape(std::string_view name) {
  if (name == "exp_rise") return Waveform::Shape::ExpRise;
  if (name == "constant") return Waveform::Shape::Constant;
  throw ModelError("unknown waveform shape '" + std::string(name) + "'");
}

Vector Source::at(double t) const {
  Vector j = pattern;
  scale(waveform(t), j);
  return j;
}

namespace {

void require(bool ok, const std::string& block, const std::string& what) {
  if (!ok) throw ModelError("block " + block + ": " + what);
}

}  // namespace

void PartitionedSystem::validate(double rel_sym_tol) const {
  const std::size_t nc = n_c(), nn = n_n();
  require(mass_c.square(), "M_c", "must be square");
  require(stiffness_n.square(), "K_n", "must be square");
  require(stiffness_c.size() == nc, "K_c", "size must match M_c (" + std::to_string(nc) + ")");
  require(coupling.nrows() == nc && coupling.ncols() == nn, "K_cn",
          "must be " + std::to_string(nc) + " x " + std::to_string(nn));
  require(source.pattern.size() == nn, "X_s", "length must match K_n (" + std::to_string(nn) + ")");
  require(nc > 0, "M_c", "no conducting dofs");
  require(symmetric_check(stiffness_n, rel_sym_tol * stiffness_n.max_abs()), "K_n", "not symmetric");
  const CsrMatrix& kl = stiffness_c.linear_part();
  require(symmetric_check(kl, rel_sym_tol * kl.max_abs()), "K_c", "not symmetric");
  require(symmetric_check(mass_c, rel_sym_tol * mass_c.max_abs()), "M_c", "not symmetric");
  for (double d : mass_c.diagonal()) require(d > 0.0, "M_c", "diagonal entries must be positive");
  require(all_finite(source.pattern), "X_s", "non-finite entries");
  source.waveform.validate();
}

}  // namespace mqs
