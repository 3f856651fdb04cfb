#include <doctest.h>

#include "mqs/krylov/pcg.hpp"
#include "mqs/model/builtin.hpp"
#include "oracle.hpp"

using namespace mqs;

namespace {

CsrMatrix path_laplacian(std::size_t n) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    t.push_back({i, i, 1.0});
    t.push_back({i + 1, i + 1, 1.0});
    t.push_back({i, i + 1, -1.0});
    t.push_back({i + 1, i, -1.0});
  }
  return CsrMatrix::from_triplets(n, n, std::move(t));
}

double residual_norm(const CsrMatrix& a, const Vector& x, const Vector& b) {
  return norm2(lincomb(1.0, spmv(a, x), -1.0, b));
}

}  // namespace

TEST_CASE("identity solves in one iteration") {
  const Vector b{1, -2, 3, 0.5, 4};
  const auto r = pcg_solve(CsrMatrix::identity(5), b, Vector(5, 0.0), PcgConfig{1e-12, 0, 100, PreconditionerKind::None});
  CHECK(r.report.iterations == 1);
  CHECK(r.report.converged);
  for (std::size_t i = 0; i < 5; ++i) CHECK(r.x[i] == doctest::Approx(b[i]));
}

TEST_CASE("diagonal system matches dense LU") {
  const CsrMatrix a = CsrMatrix::from_diagonal(Vector{1, 2, 3});
  const Vector b{1, 2, 3};
  const Eigen::VectorXd ref = oracle::dense(a).partialPivLu().solve(oracle::vec(b));
  for (auto kind : {PreconditionerKind::None, PreconditionerKind::Jacobi, PreconditionerKind::IncompleteCholesky0}) {
    const auto r = pcg_solve(a, b, Vector(3, 0.0), PcgConfig{1e-12, 0, 100, kind});
    CHECK(r.report.converged);
    for (int i = 0; i < 3; ++i) CHECK(r.x[static_cast<std::size_t>(i)] == doctest::Approx(ref(i)).epsilon(1e-10));
  }
}

TEST_CASE("random SPD system matches dense LU") {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXd d = oracle::random_spd(rng, 30);
  const CsrMatrix a = oracle::sparse(d);
  const Vector b = oracle::random_vector(rng, 30);
  const Eigen::VectorXd ref = d.partialPivLu().solve(oracle::vec(b));
  for (auto kind : {PreconditionerKind::None, PreconditionerKind::Jacobi, PreconditionerKind::IncompleteCholesky0}) {
    const auto r = pcg_solve(a, b, Vector(30, 0.0), PcgConfig{1e-12, 0, 1000, kind});
    CHECK(r.report.converged);
    CHECK((oracle::vec(r.x) - ref).norm() <= 1e-9 * ref.norm());
  }
}

TEST_CASE("singular path Laplacian with consistent rhs") {
  const CsrMatrix a = path_laplacian(4);
  const Vector b{1, -2, 3, -2};  // zero mean -> in range
  const auto r = pcg_solve(a, b, Vector(4, 0.0), PcgConfig{1e-10, 0, 100, PreconditionerKind::None});
  CHECK(r.report.converged);
  CHECK(residual_norm(a, r.x, b) <= 1e-10 * norm2(b));
  // from a zero start unpreconditioned CG stays in range(A): minimum-norm solution
  const Eigen::VectorXd mn = oracle::pinv(oracle::dense(a)) * oracle::vec(b);
  CHECK((oracle::vec(r.x) - mn).norm() <= 1e-8 * mn.norm());
}

TEST_CASE("zero-iteration shortcut returns x0 exactly") {
  std::mt19937_64 rng(12);
  const Eigen::MatrixXd d = oracle::random_spd(rng, 10);
  const CsrMatrix a = oracle::sparse(d);
  const Vector x0 = oracle::random_vector(rng, 10);
  const Vector b = spmv(a, x0);
  const auto r = pcg_solve(a, b, x0, PcgConfig{1e-8, 0, 100, PreconditionerKind::Jacobi});
  CHECK(r.report.iterations == 0);
  CHECK(r.report.converged);
  CHECK(r.x == x0);
}

TEST_CASE("zero rhs gives zero solution") {
  const auto r = pcg_solve(path_laplacian(5), Vector(5, 0.0), Vector{1, 2, 3, 4, 5}, PcgConfig{});
  CHECK(r.x == Vector(5, 0.0));
  CHECK(r.report.iterations == 0);
}

TEST_CASE("iterations count operator applications after the initial residual") {
  std::mt19937_64 rng(13);
  const CsrMatrix a = oracle::sparse(oracle::random_spd(rng, 20));
  const MatrixOperator op(a);
  const CountingOperator counter(op);
  const Vector b = oracle::random_vector(rng, 20);
  const auto r = pcg_solve(counter, b, Vector(20, 0.0), PcgConfig{1e-10, 0, 100, PreconditionerKind::None},
                           Preconditioner::identity(20));
  CHECK(counter.count() == r.report.iterations + 1);
}

TEST_CASE("max_iter exceeded reports instead of throwing") {
  std::mt19937_64 rng(14);
  const CsrMatrix a = oracle::sparse(oracle::random_spd(rng, 40, 1e-3));
  const Vector b = oracle::random_vector(rng, 40);
  const auto r = pcg_solve(a, b, Vector(40, 0.0), PcgConfig{1e-14, 0, 2, PreconditionerKind::None});
  CHECK_FALSE(r.report.converged);
  CHECK(r.report.iterations == 2);
}

TEST_CASE("indefinite operator is detected") {
  const CsrMatrix a = CsrMatrix::from_diagonal(Vector{1.0, -5.0});
  CHECK_THROWS_AS(pcg_solve(a, Vector{0.1, 1.0}, Vector(2, 0.0), PcgConfig{1e-10, 0, 10, PreconditionerKind::None}),
                  IndefiniteOperatorError);
}

TEST_CASE("A-norm error decreases monotonically") {
  std::mt19937_64 rng(15);
  const Eigen::MatrixXd d = oracle::random_spd(rng, 25, 0.1);
  const CsrMatrix a = oracle::sparse(d);
  const Vector b = oracle::random_vector(rng, 25);
  const Eigen::VectorXd xs = d.ldlt().solve(oracle::vec(b));
  double prev = 1e300;
  for (std::size_t k = 1; k <= 25; ++k) {
    const auto r = pcg_solve(a, b, Vector(25, 0.0), PcgConfig{1e-15, 0, k, PreconditionerKind::Jacobi});
    const Eigen::VectorXd e = oracle::vec(r.x) - xs;
    const double en = std::sqrt(e.dot(d * e));
    CHECK(en <= prev * (1.0 + 1e-10) + 1e-13);
    prev = en;
    if (r.report.converged) break;
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS(PcgConfig{0.0, 0, 10, PreconditionerKind::None}.validate());
  CHECK_THROWS(PcgConfig{1e-8, 0, 0, PreconditionerKind::None}.validate());
  CHECK_THROWS(PcgConfig{1e-8, -1.0, 10, PreconditionerKind::None}.validate());
}

TEST_CASE("Jacobi preconditioner") {
  const Preconditioner m = Preconditioner::jacobi(CsrMatrix::from_diagonal(Vector{2, 4}));
  Vector z(2);
  m.apply(Vector{2, 4}, z);
  CHECK(z == Vector{1, 1});
  // zero diagonal row: identity action
  const Preconditioner s = Preconditioner::jacobi(CsrMatrix::from_triplets(2, 2, {{0, 0, 2.0}}));
  s.apply(Vector{2, 7}, z);
  CHECK(z == Vector{1, 7});
}

TEST_CASE("IC(0) on a tridiagonal SPD matrix is the exact Cholesky factor") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    d(i, i) = 4.0 + i;
    if (i + 1 < 4) d(i, i + 1) = d(i + 1, i) = -1.0 - 0.5 * i;
  }
  const CsrMatrix a = oracle::sparse(d);
  const auto ic = Preconditioner::incomplete_cholesky(a);
  REQUIRE(ic.has_value());
  CHECK(ic->kind() == PreconditionerKind::IncompleteCholesky0);
  // M^-1 A must be the identity: apply M^-1 to each column of A
  for (std::size_t j = 0; j < 4; ++j) {
    Vector col(4), z(4);
    for (std::size_t i = 0; i < 4; ++i) col[i] = a.at(i, j);
    ic->apply(col, z);
    for (std::size_t i = 0; i < 4; ++i) CHECK(z[i] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
  }
  const auto r = pcg_solve(a, Vector{1, 2, 3, 4}, Vector(4, 0.0), PcgConfig{1e-12, 0, 10, PreconditionerKind::IncompleteCholesky0});
  CHECK(r.report.iterations == 1);
}

TEST_CASE("IC(0) failure degrades to Jacobi") {
  const CsrMatrix a = CsrMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 1.0}});
  CHECK_FALSE(Preconditioner::incomplete_cholesky(a).has_value());
  CHECK(build_preconditioner(a, PreconditionerKind::IncompleteCholesky0).kind() == PreconditionerKind::Jacobi);
}

TEST_CASE("preconditioner names") {
  CHECK(parse_preconditioner("ic0") == PreconditionerKind::IncompleteCholesky0);
  CHECK(parse_preconditioner("jacobi") == PreconditionerKind::Jacobi);
  CHECK(parse_preconditioner("none") == PreconditionerKind::None);
  CHECK_THROWS(parse_preconditioner("amg"));
}

TEST_CASE("singular K_n with manufactured consistent rhs") {
  for (std::size_t n : {6u, 8u, 10u}) {
    const AssembledModel m = builtin_model(n);
    const CsrMatrix& kn = m.system.stiffness_n;
    std::mt19937_64 rng(n);
    const Vector y = oracle::random_vector(rng, kn.nrows());
    const Vector b = spmv(kn, y);
    for (auto kind : {PreconditionerKind::Jacobi, PreconditionerKind::IncompleteCholesky0}) {
      const auto r = pcg_solve(kn, b, Vector(kn.nrows(), 0.0), PcgConfig{1e-8, 0, 10000, kind});
      CHECK(r.report.converged);
      CHECK(residual_norm(kn, r.x, b) <= 1e-8 * norm2(b));
    }
  }
}
