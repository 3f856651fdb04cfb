#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mqs/sparse/vector_ops.hpp"

namespace mqs {

/// Modified Gram-Schmidt with one reorthogonalization pass. A column whose
/// norm after projection falls below drop_tol times its original norm is
/// treated as linearly dependent and dropped.
std::vector<Vector> mgs_orthonormalize(const std::vector<Vector>& vectors, double drop_tol = 1e-12);

/// Orthonormalizes `v` against an orthonormal `basis`; nullopt if dependent.
std::optional<Vector> orthonormalize_against(const std::vector<Vector>& basis, std::span<const double> v,
                                             double drop_tol = 1e-12);

}  // namespace mqs
