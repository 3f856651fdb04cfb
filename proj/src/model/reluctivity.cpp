#include "mqs/model/reluctivity.hpp"

#include <cmath>
#include <stdexcept>

namespace mqs {

void BrauerCurve::validate() const {
  if (!(k1 >= 0.0) || !(k2 >= 0.0) || !(k3 > 0.0))
    throw std::invalid_argument("BrauerCurve: require k1 >= 0, k2 >= 0, k3 > 0");
}

ReluctivityValue reluctivity(const BrauerCurve& curve, double b2) {
  if (!(b2 >= 0.0)) throw std::invalid_argument("reluctivity: B^2 must be nonnegative");
  if (curve.k1 == 0.0) return {curve.k3, 0.0};  // linear: no 0 * inf at huge B
  const double e = curve.k1 * std::exp(curve.k2 * b2);
  return {e + curve.k3, curve.k2 * e};
}

}  // namespace mqs
