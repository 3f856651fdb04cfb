#pragma once

namespace mqs {

/// Reluctivity of free space, 1/mu_0 in m/H.
inline constexpr double kNuVacuum = 1.0 / (4.0e-7 * 3.14159265358979323846);

/// Brauer fit nu(B^2) = k1 exp(k2 B^2) + k3. Monotone nondecreasing in B^2
/// for k1, k2 >= 0; k1 = 0 is a linear material.
struct BrauerCurve {
  double k1 = 49.4;
  double k2 = 1.46;
  double k3 = 520.6;

  void validate() const;
  bool linear() const { return k1 == 0.0 || k2 == 0.0; }
  friend bool operator==(const BrauerCurve&, const BrauerCurve&) = default;
};

struct ReluctivityValue {
  double nu;
  double dnu_db2;  // derivative with respect to B^2
};

/// Throws std::invalid_argument for negative b2.
ReluctivityValue reluctivity(const BrauerCurve& curve, double b2);

}  // namespace mqs
