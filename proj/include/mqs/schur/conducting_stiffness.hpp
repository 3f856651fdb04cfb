#pragma once

#include <span>

#include "mqs/model/reluctivity.hpp"
#include "mqs/sparse/csr_matrix.hpp"

namespace mqs {

/// Curl-curl block on the conducting dofs, K_c(a_c). It is the sum of a
/// state-independent part and a saturable part built from the faces of
/// ferromagnetic cells:
///
///   K_c(a) = K_lin + F^T diag(d(a)) F,   d_f = sum_c P_cf nu_c(s_c) / (2h)
///   s_c    = sum_f P_cf (F a)_f^2 / (2 h^4)
///
/// with F the face curl restricted to those faces, P the cell/face
/// incidence and s_c the cell's mean squared flux density. K_c(a) a is then
/// the gradient of a convex magnetic energy, so the Jacobian is symmetric.
class ConductingStiffness {
 public:
  ConductingStiffness() = default;
  explicit ConductingStiffness(CsrMatrix linear_part);
  ConductingStiffness(CsrMatrix linear_part, CsrMatrix face_curl, CsrMatrix cell_faces, double cell_size,
                      BrauerCurve curve);

  std::size_t size() const { return linear_.nrows(); }
  bool has_saturable_part() const { return face_curl_.nrows() > 0; }

  const CsrMatrix& linear_part() const { return linear_; }
  const CsrMatrix& face_curl() const { return face_curl_; }
  const CsrMatrix& cell_faces() const { return cell_faces_; }
  double cell_size() const { return h_; }
  const BrauerCurve& curve() const { return curve_; }

  /// s_c per saturable cell.
  Vector cell_b2(std::span<const double> state) const;

  /// y = K_c(state) x
  void apply(std::span<const double> state, std::span<const double> x, std::span<double> y) const;
  /// K_c(state) state
  Vector apply(std::span<const double> state) const;

  /// K_c(state) as a matrix (secant stiffness).
  CsrMatrix secant(std::span<const double> state) const;
  /// d/da [K_c(a) a] at `state`.
  CsrMatrix jacobian(std::span<const double> state) const;

  /// State-independent copy with K_lin := K_c(state).
  ConductingStiffness frozen(std::span<const double> state) const;

  friend bool operator==(const ConductingStiffness&, const ConductingStiffness&) = default;

 private:
  Vector face_weights(std::span<const double> state) const;

  CsrMatrix linear_;
  CsrMatrix face_curl_;
  CsrMatrix face_curl_t_;
  CsrMatrix cell_faces_;
  double h_ = 1.0;
  BrauerCurve curve_{};
};

}  // namespace mqs
