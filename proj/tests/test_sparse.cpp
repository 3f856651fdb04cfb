#include <doctest.h>

#include <sstream>

#include "mqs/errors.hpp"
#include "mqs/model/builtin.hpp"
#include "mqs/sparse/csr_matrix.hpp"
#include "mqs/sparse/matrix_market.hpp"
#include "oracle.hpp"

using namespace mqs;

TEST_CASE("from_triplets sorts and merges duplicates") {
  const CsrMatrix a = CsrMatrix::from_triplets(2, 3, {{1, 2, 1.0}, {0, 1, 2.0}, {1, 0, 3.0}, {0, 1, 0.5}});
  CHECK(a.nnz() == 3);
  CHECK(a.row_ptr() == std::vector<std::size_t>{0, 1, 3});
  CHECK(a.col_idx() == std::vector<std::size_t>{1, 0, 2});
  CHECK(a.at(0, 1) == 2.5);
  CHECK(a.at(1, 1) == 0.0);
}

TEST_CASE("constructor rejects broken structure") {
  CHECK_THROWS(CsrMatrix(2, 2, {0, 2, 1}, {0, 1}, {1.0, 1.0}));
  CHECK_THROWS(CsrMatrix(1, 2, {0, 2}, {1, 0}, {1.0, 1.0}));  // unsorted
  CHECK_THROWS(CsrMatrix(1, 2, {0, 2}, {1, 1}, {1.0, 1.0}));  // duplicate
  CHECK_THROWS(CsrMatrix(1, 2, {0, 1}, {2}, {1.0}));          // column out of range
}

TEST_CASE("spmv small cases") {
  const Vector x{1, 2, 3};
  CHECK(spmv(CsrMatrix::identity(3), x) == x);
  const CsrMatrix a = CsrMatrix::from_triplets(2, 2, {{0, 0, 2.0}, {1, 0, 1.0}, {1, 1, 3.0}});
  CHECK(spmv(a, Vector{1, 1}) == Vector{2, 4});
  CHECK_THROWS_AS(spmv(a, x), std::invalid_argument);
}

TEST_CASE("spmv with unit vector extracts a column") {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd d = oracle::random_matrix(rng, 5, 5, 0.6);
  const CsrMatrix a = oracle::sparse(d);
  const Vector col = spmv(a, Vector{0, 0, 1, 0, 0});
  for (int i = 0; i < 5; ++i) CHECK(col[static_cast<std::size_t>(i)] == d(i, 2));
}

TEST_CASE("spmv_transpose") {
  const Vector x{1.5, -2.0, 0.25};
  CHECK(spmv_transpose(CsrMatrix::identity(3), x) == x);
  const CsrMatrix a = CsrMatrix::from_triplets(2, 2, {{0, 1, 1.0}});
  CHECK(spmv_transpose(a, Vector{1, 0}) == Vector{0, 1});
  CHECK_THROWS_AS(spmv_transpose(a, x), std::invalid_argument);

  std::mt19937_64 rng(2);
  const CsrMatrix b = oracle::sparse(oracle::random_matrix(rng, 6, 4));
  const Vector y = oracle::random_vector(rng, 6);
  const Vector direct = spmv_transpose(b, y);
  const Vector via = spmv(b.transpose(), y);
  for (std::size_t i = 0; i < 4; ++i) CHECK(direct[i] == doctest::Approx(via[i]).epsilon(1e-14));
}

TEST_CASE("spmv_transpose matches materialized transpose up to 100x100") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const int r = 1 + static_cast<int>(rng() % 100), c = 1 + static_cast<int>(rng() % 100);
    const Eigen::MatrixXd d = oracle::random_matrix(rng, r, c, 0.1);
    const CsrMatrix a = oracle::sparse(d);
    const Vector x = oracle::random_vector(rng, static_cast<std::size_t>(r));
    const Eigen::VectorXd expect = d.transpose() * oracle::vec(x);
    const Eigen::VectorXd got = oracle::vec(spmv_transpose(a, x));
    CHECK((got - expect).norm() <= 1e-14 * std::max(1.0, expect.norm()) * 10);
    const Vector via = spmv(a.transpose(), x);
    CHECK((oracle::vec(via) - got).norm() <= 1e-14 * std::max(1.0, got.norm()));
  }
}

TEST_CASE("spmv is linear") {
  std::mt19937_64 rng(4);
  const CsrMatrix a = oracle::sparse(oracle::random_matrix(rng, 40, 30, 0.2));
  const Vector x = oracle::random_vector(rng, 30), y = oracle::random_vector(rng, 30);
  const double al = 0.7, be = -2.3;
  const Eigen::VectorXd lhs = oracle::vec(spmv(a, lincomb(al, x, be, y)));
  const Eigen::VectorXd rhs = al * oracle::vec(spmv(a, x)) + be * oracle::vec(spmv(a, y));
  CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
}

TEST_CASE("symmetric_check") {
  CHECK(symmetric_check(CsrMatrix::identity(4), 0.0));
  const CsrMatrix a = CsrMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 2.0}});
  CHECK_FALSE(symmetric_check(a, 0.5));
  CHECK(symmetric_check(a, 1.0));
  // entry present on one side only
  CHECK_FALSE(symmetric_check(CsrMatrix::from_triplets(2, 2, {{0, 1, 1.0}}), 0.5));
  CHECK_THROWS(symmetric_check(CsrMatrix::from_triplets(2, 3, {}), 0.0));
}

TEST_CASE("symmetric_check on K_n of an assembled grid") {
  const AssembledModel m = builtin_model(6);
  CHECK(symmetric_check(m.system.stiffness_n, 1e-12 * m.system.stiffness_n.max_abs()));
}

TEST_CASE("sparse product and transpose match dense") {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd a = oracle::random_matrix(rng, 7, 5), b = oracle::random_matrix(rng, 5, 6);
  const CsrMatrix p = multiply(oracle::sparse(a), oracle::sparse(b));
  CHECK((oracle::dense(p) - a * b).norm() <= 1e-14 * (a * b).norm() + 1e-300);
  CHECK((oracle::dense(oracle::sparse(a).transpose()) - a.transpose()).norm() == 0.0);
}

TEST_CASE("extract_block restricts and renumbers") {
  const CsrMatrix a = CsrMatrix::from_triplets(3, 3, {{0, 0, 1}, {0, 2, 2}, {1, 1, 3}, {2, 0, 4}, {2, 2, 5}});
  const std::vector<std::size_t> rows{1, kDropped, 0}, cols{kDropped, 1, 0};
  const CsrMatrix b = extract_block(a, rows, 2, cols, 2);
  CHECK(oracle::dense(b) == (Eigen::Matrix2d() << 5, 0, 2, 0).finished());
}

TEST_CASE("diagonal helpers") {
  const CsrMatrix d = CsrMatrix::from_diagonal(Vector{1, 2, 3});
  CHECK(d.is_diagonal());
  CHECK(d.diagonal() == Vector{1, 2, 3});
  CHECK_FALSE(CsrMatrix::from_triplets(2, 2, {{0, 1, 1.0}}).is_diagonal());
}

TEST_CASE("matrix market roundtrip") {
  std::mt19937_64 rng(6);
  const CsrMatrix a = oracle::sparse(oracle::random_matrix(rng, 9, 4));
  std::stringstream s;
  write_matrix_market(s, a);
  CHECK(read_matrix_market(s) == a);

  const Eigen::MatrixXd spd = oracle::random_spd(rng, 6);
  const CsrMatrix sym = oracle::sparse(spd);
  std::stringstream t;
  write_matrix_market(t, sym, MatrixMarketSymmetry::Symmetric);
  const std::string text = t.str();
  CHECK(text.find("symmetric") != std::string::npos);
  const CsrMatrix back = read_matrix_market(t);
  CHECK((oracle::dense(back) - spd).norm() == 0.0);
}

TEST_CASE("matrix market rejects malformed input") {
  std::stringstream bad1("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
  CHECK_THROWS_AS(read_matrix_market(bad1), ModelError);
  std::stringstream bad2("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n");
  CHECK_THROWS_AS(read_matrix_market(bad2), ModelError);
  std::stringstream bad3("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n");
  CHECK_THROWS_AS(read_matrix_market(bad3), ModelError);
}
