#pragma once

#include <stdexcept>
#include <string>

namespace mqs {

/// Bad model data or configuration: malformed files, failed invariants on
/// input blocks, inconsistent manifests. Maps to CLI exit code 2.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure during a numerical computation (breakdown, non-convergence,
/// non-finite state). Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mqs
