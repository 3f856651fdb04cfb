#include "mqs/schur/cfl.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mqs {

CflEstimate estimate_cfl(SchurOperator& op, std::span<const double> a_c_ref, std::size_t power_iters,
                         double power_tol, double safety, std::span<const double> start, std::uint64_t seed) {
  const PartitionedSystem& s = op.system();
  const std::size_t n = s.n_c();
  if (a_c_ref.size() != n) throw std::invalid_argument("estimate_cfl: state dimension mismatch");
  if (!(safety > 0.0) || power_iters < 1) throw std::invalid_argument("estimate_cfl: bad parameters");

  Vector v(start.begin(), start.end());
  if (v.size() != n || norm2(v) == 0.0) {
    std::mt19937_64 rng(start.empty() ? seed : 42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    v.resize(n);
    for (double& x : v) x = dist(rng);
  }

  const CsrMatrix& m = s.mass_c;
  CflEstimate out;
  out.safety = safety;
  out.power_tol = power_tol;
  Vector inner_prev(s.n_n(), 0.0);
  double lambda_prev = 0.0;
  for (std::size_t it = 1; it <= power_iters; ++it) {
    scale(1.0 / std::sqrt(dot(v, spmv(m, v))), v);  // unit M-norm
    // K_S v with the inner solve warm-started from the previous iterate.
    const Vector rhs = spmv_transpose(s.coupling, v);
    PcgResult inner = op.solve_n_from(rhs, inner_prev);
    inner_prev = inner.x;
    Vector w(n);
    s.stiffness_c.apply(a_c_ref, v, w);
    axpy(-1.0, spmv(s.coupling, inner.x), w);

    const double lambda = dot(v, w);
    out.lambda_max = lambda;
    out.power_iters = it;
    if (it > 1 && std::abs(lambda - lambda_prev) < power_tol * std::abs(lambda)) {
      out.converged = true;
      break;
    }
    lambda_prev = lambda;
    v = op.apply_mass_inverse(w);
    if (norm2(v) == 0.0) break;
  }
  if (!(out.lambda_max > 0.0)) throw NumericalError("estimate_cfl: nonpositive spectral radius estimate");
  out.dt_max = safety * 2.0 / out.lambda_max;
  return out;
}

}  // namespace mqs
