#include "mqs/schur/conducting_stiffness.hpp"

#include <stdexcept>

namespace mqs {

namespace {

CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b) {
  auto t = a.triplets();
  auto tb = b.triplets();
  t.insert(t.end(), tb.begin(), tb.end());
  return CsrMatrix::from_triplets(a.nrows(), a.ncols(), std::move(t));
}

CsrMatrix scale_rows(const CsrMatrix& a, std::span<const double> w) {
  std::vector<double> v = a.values();
  for (std::size_t i = 0; i < a.nrows(); ++i)
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) v[k] *= w[i];
  return CsrMatrix(a.nrows(), a.ncols(), a.row_ptr(), a.col_idx(), std::move(v));
}

}  // namespace

ConductingStiffness::ConductingStiffness(CsrMatrix linear_part) : linear_(std::move(linear_part)) {
  if (!linear_.square()) throw std::invalid_argument("ConductingStiffness: linear part must be square");
  face_curl_ = CsrMatrix(0, linear_.ncols(), {0}, {}, {});
  face_curl_t_ = face_curl_.transpose();
  cell_faces_ = CsrMatrix(0, 0, {0}, {}, {});
}

ConductingStiffness::ConductingStiffness(CsrMatrix linear_part, CsrMatrix face_curl, CsrMatrix cell_faces,
                                         double cell_size, BrauerCurve curve)
    : linear_(std::move(linear_part)),
      face_curl_(std::move(face_curl)),
      cell_faces_(std::move(cell_faces)),
      h_(cell_size),
      curve_(curve) {
  if (!linear_.square()) throw std::invalid_argument("ConductingStiffness: linear part must be square");
  if (face_curl_.ncols() != linear_.ncols())
    throw std::invalid_argument("ConductingStiffness: face curl column count must match the block size");
  if (cell_faces_.ncols() != face_curl_.nrows())
    throw std::invalid_argument("ConductingStiffness: cell/face incidence does not match the face count");
  if (!(h_ > 0.0)) throw std::invalid_argument("ConductingStiffness: cell size must be positive");
  curve_.validate();
  face_curl_t_ = face_curl_.transpose();
}

Vector ConductingStiffness::cell_b2(std::span<const double> state) const {
  const Vector flux = spmv(face_curl_, state);
  Vector sq(flux.size());
  for (std::size_t f = 0; f < flux.size(); ++f) sq[f] = flux[f] * flux[f];
  Vector s = spmv(cell_faces_, sq);
  const double h4 = h_ * h_ * h_ * h_;
  for (double& v : s) v /= 2.0 * h4;
  return s;
}

Vector ConductingStiffness::face_weights(std::span<const double> state) const {
  const Vector s = cell_b2(state);
  Vector nu(s.size());
  for (std::size_t c = 0; c < s.size(); ++c) nu[c] = reluctivity(curve_, s[c]).nu / (2.0 * h_);
  return spmv_transpose(cell_faces_, nu);
}

void ConductingStiffness::apply(std::span<const double> state, std::span<const double> x, std::span<double> y) const {
  linear_.multiply(x, y);
  if (!has_saturable_part()) return;
  const Vector d = face_weights(state);
  Vector flux = spmv(face_curl_, x);
  for (std::size_t f = 0; f < flux.size(); ++f) flux[f] *= d[f];
  const Vector back = spmv(face_curl_t_, flux);
  axpy(1.0, back, y);
}

Vector ConductingStiffness::apply(std::span<const double> state) const {
  Vector y(size());
  apply(state, state, y);
  return y;
}

CsrMatrix ConductingStiffness::secant(std::span<const double> state) const {
  if (!has_saturable_part()) return linear_;
  const Vector d = face_weights(state);
  return add(linear_, multiply(face_curl_t_, scale_rows(face_curl_, d)));
}

CsrMatrix ConductingStiffness::jacobian(std::span<const double> state) const {
  if (!has_saturable_part()) return linear_;
  // Hessian of the energy in face fluxes: per cell a rank-one term
  // nu'(s_c) / (2 h^5) (P_c phi)(P_c phi)^T on top of the secant weights.
  const Vector flux = spmv(face_curl_, state);
  const Vector s = cell_b2(state);
  const double h5 = h_ * h_ * h_ * h_ * h_;
  std::vector<Triplet> t;
  const auto& rp = cell_faces_.row_ptr();
  const auto& ci = cell_faces_.col_idx();
  const auto& pv = cell_faces_.values();
  for (std::size_t c = 0; c < cell_faces_.nrows(); ++c) {
    const double coef = reluctivity(curve_, s[c]).dnu_db2 / (2.0 * h5);
    if (coef == 0.0) continue;
    for (std::size_t a = rp[c]; a < rp[c + 1]; ++a)
      for (std::size_t b = rp[c]; b < rp[c + 1]; ++b)
        t.push_back({ci[a], ci[b], coef * pv[a] * flux[ci[a]] * pv[b] * flux[ci[b]]});
  }
  const CsrMatrix hess = CsrMatrix::from_triplets(face_curl_.nrows(), face_curl_.nrows(), std::move(t));
  return add(secant(state), multiply(face_curl_t_, multiply(hess, face_curl_)));
}

ConductingStiffness ConductingStiffness::frozen(std::span<const double> state) const {
  return ConductingStiffness(secant(state));
}

}  // namespace mqs
