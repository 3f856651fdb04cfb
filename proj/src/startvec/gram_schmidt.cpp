#include "mqs/startvec/gram_schmidt.hpp"

#include <stdexcept>

namespace mqs {

std::optional<Vector> orthonormalize_against(const std::vector<Vector>& basis, std::span<const double> v,
                                             double drop_tol) {
  const double original = norm2(v);
  if (original == 0.0) return std::nullopt;
  Vector w(v.begin(), v.end());
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vector& q : basis) {
      if (q.size() != w.size()) throw std::invalid_argument("orthonormalize_against: length mismatch");
      axpy(-dot(q, w), q, w);
    }
  }
  const double residual = norm2(w);
  if (residual < drop_tol * original) return std::nullopt;
  scale(1.0 / residual, w);
  return w;
}

std::vector<Vector> mgs_orthonormalize(const std::vector<Vector>& vectors, double drop_tol) {
  std::vector<Vector> out;
  for (const Vector& v : vectors) {
    if (!vectors.empty() && v.size() != vectors.front().size())
      throw std::invalid_argument("mgs_orthonormalize: columns differ in length");
    if (auto q = orthonormalize_against(out, v, drop_tol)) out.push_back(std::move(*q));
  }
  return out;
}

}  // namespace mqs
