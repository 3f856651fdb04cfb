#pragma once
// Dense Eigen counterparts of the sparse objects under test.

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "mqs/sparse/csr_matrix.hpp"

namespace oracle {

inline Eigen::MatrixXd dense(const mqs::CsrMatrix& a) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.nrows()), static_cast<Eigen::Index>(a.ncols()));
  for (const auto& t : a.triplets()) d(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) += t.value;
  return d;
}

inline Eigen::VectorXd vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> stl(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

inline mqs::CsrMatrix sparse(const Eigen::MatrixXd& d) {
  std::vector<mqs::Triplet> t;
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = 0; j < d.cols(); ++j)
      if (d(i, j) != 0.0) t.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), d(i, j)});
  return mqs::CsrMatrix::from_triplets(static_cast<std::size_t>(d.rows()), static_cast<std::size_t>(d.cols()),
                                       std::move(t));
}

/// Random sparse-ish matrix with the given fill fraction.
inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int rows, int cols, double fill = 0.3) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), f(0.0, 1.0);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (f(rng) < fill) d(i, j) = u(rng);
  return d;
}

/// Random SPD matrix B^T B + shift I.
inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, int n, double shift = 1.0) {
  const Eigen::MatrixXd b = random_matrix(rng, n, n, 0.5);
  return b.transpose() * b + shift * Eigen::MatrixXd::Identity(n, n);
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

inline Eigen::MatrixXd pinv(const Eigen::MatrixXd& a, double rel = 1e-10) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd s = svd.singularValues();
  const double cut = rel * (s.size() ? s(0) : 0.0);
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = s(i) > cut ? 1.0 / s(i) : 0.0;
  return svd.matrixV() * s.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace oracle
