#include <doctest.h>

#include <cmath>

#include "mqs/krylov/pcg.hpp"
#include "mqs/startvec/gram_schmidt.hpp"
#include "mqs/startvec/small_dense.hpp"
#include "mqs/startvec/snapshot_pod.hpp"
#include "mqs/startvec/strategy.hpp"
#include "mqs/startvec/subspace_cache.hpp"
#include "oracle.hpp"

using namespace mqs;

namespace {

double max_orthogonality_error(const std::vector<Vector>& u) {
  double e = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j) e = std::max(e, std::abs(dot(u[i], u[j]) - (i == j ? 1.0 : 0.0)));
  return e;
}

}  // namespace

TEST_CASE("mgs: already orthonormal input unchanged") {
  const auto out = mgs_orthonormalize({{1, 0, 0}, {0, 1, 0}});
  REQUIRE(out.size() == 2);
  CHECK(out[0] == Vector{1, 0, 0});
  CHECK(out[1] == Vector{0, 1, 0});
}

TEST_CASE("mgs: hand example matches QR") {
  const auto out = mgs_orthonormalize({{1, 1, 0}, {1, 0, 0}});
  REQUIRE(out.size() == 2);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(out[0][0] == doctest::Approx(s));
  CHECK(out[0][1] == doctest::Approx(s));
  CHECK(out[1][0] == doctest::Approx(s));
  CHECK(out[1][1] == doctest::Approx(-s));
  CHECK(std::abs(out[1][2]) < 1e-15);
  // Eigen QR spans the same columns up to sign
  Eigen::MatrixXd a(3, 2);
  a << 1, 1, 1, 0, 0, 0;
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ() * Eigen::MatrixXd::Identity(3, 2);
  for (int j = 0; j < 2; ++j)
    CHECK(std::abs(std::abs(q.col(j).dot(oracle::vec(out[static_cast<std::size_t>(j)]))) - 1.0) < 1e-12);
}

TEST_CASE("mgs: dependent and empty input") {
  const auto out = mgs_orthonormalize({{1, 2, 2}, {2, 4, 4}});
  REQUIRE(out.size() == 1);
  CHECK(out[0][0] == doctest::Approx(1.0 / 3.0));
  CHECK(mgs_orthonormalize({}).empty());
  CHECK(mgs_orthonormalize({{0, 0, 0}}).empty());
}

TEST_CASE("mgs: orthonormality on nearly dependent random columns") {
  std::mt19937_64 rng(21);
  std::vector<Vector> v;
  const Vector base = oracle::random_vector(rng, 50);
  for (int i = 0; i < 15; ++i) {
    Vector w = oracle::random_vector(rng, 50);
    scale(1e-6, w);
    axpy(1.0, base, w);
    v.push_back(w);
  }
  const auto out = mgs_orthonormalize(v);
  CHECK(out.size() == 15);
  CHECK(max_orthogonality_error(out) <= 1e-10);
}

TEST_CASE("dense Cholesky and Jacobi eigen against Eigen") {
  std::mt19937_64 rng(22);
  const Eigen::MatrixXd a = oracle::random_spd(rng, 8);
  DenseMatrix d(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) d(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = a(i, j);
  const auto chol = cholesky(d);
  REQUIRE_FALSE(chol.failed_pivot.has_value());
  const Vector b = oracle::random_vector(rng, 8);
  const Eigen::VectorXd ref = a.ldlt().solve(oracle::vec(b));
  CHECK((oracle::vec(cholesky_solve(chol.lower, b)) - ref).norm() <= 1e-12 * ref.norm());

  const auto eig = jacobi_eigen(d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  for (int i = 0; i < 8; ++i)
    CHECK(eig.values[static_cast<std::size_t>(i)] == doctest::Approx(es.eigenvalues()(7 - i)).epsilon(1e-12));

  DenseMatrix sing(2, 2);
  sing(0, 0) = sing(0, 1) = sing(1, 0) = sing(1, 1) = 1.0;
  CHECK(cholesky(sing).failed_pivot == std::optional<std::size_t>(1));
}

TEST_CASE("SPE: one-dimensional subspace containing the solution") {
  std::mt19937_64 rng(23);
  const Eigen::MatrixXd kd = oracle::random_spd(rng, 40);
  const CsrMatrix k = oracle::sparse(kd);
  const MatrixOperator op(k);
  const Vector j = oracle::random_vector(rng, 40);
  const Vector xs = oracle::stl(kd.partialPivLu().solve(oracle::vec(j)));
  SubspaceCache cache;
  REQUIRE(cache.insert(xs, op));
  const Vector x0 = spe_start_vector(cache, j);
  CHECK((oracle::vec(x0) - oracle::vec(xs)).norm() <= 1e-10 * norm2(xs));
}

TEST_CASE("SPE: trivial projections") {
  const CsrMatrix k = CsrMatrix::from_diagonal(Vector{1, 2, 3});
  const MatrixOperator op(k);
  SubspaceCache cache;
  CHECK(spe_start_vector(cache, Vector{1, 1, 1}) == Vector(3, 0.0));  // empty cache
  cache.insert(Vector{1, 0, 0}, op);
  CHECK(spe_start_vector(cache, Vector(3, 0.0)) == Vector(3, 0.0));
  CHECK(spe_start_vector(cache, Vector{0, 1, 1}) == Vector(3, 0.0));  // U^T j = 0
}

TEST_CASE("SPE start vector minimizes the energy error over a 2-d span") {
  std::mt19937_64 rng(24);
  const Eigen::MatrixXd kd = oracle::random_spd(rng, 12);
  const CsrMatrix k = oracle::sparse(kd);
  const MatrixOperator op(k);
  const Vector j = oracle::random_vector(rng, 12);
  const Eigen::VectorXd xs = kd.ldlt().solve(oracle::vec(j));
  SubspaceCache cache;
  cache.insert(oracle::random_vector(rng, 12), op);
  cache.insert(oracle::random_vector(rng, 12), op);
  REQUIRE(cache.columns() == 2);
  const Eigen::VectorXd x0 = oracle::vec(spe_start_vector(cache, j));
  auto energy = [&](const Eigen::VectorXd& x) { return (x - xs).dot(kd * (x - xs)); };
  const double best = energy(x0);
  const Eigen::VectorXd u0 = oracle::vec(cache.basis()[0]), u1 = oracle::vec(cache.basis()[1]);
  const double c0 = u0.dot(x0), c1 = u1.dot(x0);
  double grid_min = 1e300;
  for (int a = -50; a <= 50; ++a)
    for (int b = -50; b <= 50; ++b) {
      const double p = c0 + 0.02 * a * (1.0 + std::abs(c0)), q = c1 + 0.02 * b * (1.0 + std::abs(c1));
      grid_min = std::min(grid_min, energy(p * u0 + q * u1));
    }
  CHECK(best <= grid_min * (1.0 + 1e-12));
}

TEST_CASE("CSPE insert: one product per accepted column, dependent columns rejected") {
  std::mt19937_64 rng(25);
  const CsrMatrix k = oracle::sparse(oracle::random_spd(rng, 30));
  const MatrixOperator mop(k);
  const CountingOperator op(mop);
  SubspaceCache cache(20);
  const Vector v = oracle::random_vector(rng, 30);
  CHECK(cache.insert(v, op));
  CHECK(op.count() == 1);
  Vector v2 = v;
  scale(2.0, v2);
  CHECK_FALSE(cache.insert(v2, op));
  CHECK(cache.columns() == 1);
  CHECK(op.count() == 1);

  std::size_t accepted = 1;
  for (int i = 0; i < 10; ++i) {
    const std::vector<Vector> before = cache.products();
    const bool ok = cache.insert(oracle::random_vector(rng, 30), op);
    accepted += ok ? 1 : 0;
    for (std::size_t c = 0; c < before.size(); ++c) CHECK(cache.products()[c] == before[c]);  // bit-identical
  }
  CHECK(op.count() == accepted);
  CHECK(cache.products_computed() == accepted);
  CHECK(max_orthogonality_error(cache.basis()) <= 1e-10);
  for (std::size_t c = 0; c < cache.columns(); ++c) {
    const Vector p = spmv(k, cache.basis()[c]);
    CHECK(norm2(lincomb(1.0, p, -1.0, cache.products()[c])) <= 1e-12 * norm2(p));
    for (std::size_t d = 0; d < cache.columns(); ++d)
      CHECK(cache.galerkin()(c, d) == doctest::Approx(dot(cache.basis()[c], spmv(k, cache.basis()[d]))).epsilon(1e-12));
  }
}

TEST_CASE("CSPE eviction is FIFO at max_cols") {
  const std::size_t n = 10;
  const CsrMatrix k = CsrMatrix::identity(n);
  const MatrixOperator op(k);
  SubspaceCache cache(3);
  for (std::size_t i = 0; i < 5; ++i) {
    Vector e(n, 0.0);
    e[i] = 1.0;
    CHECK(cache.insert(e, op));
    CHECK(cache.columns() <= 3);
  }
  REQUIRE(cache.columns() == 3);
  CHECK(cache.basis()[0][2] == 1.0);
  CHECK(cache.basis()[2][4] == 1.0);
}

TEST_CASE("POD truncation arithmetic") {
  CHECK(pod_truncation(Vector{1, 1e-3, 1e-5}, 1e-4) == 2);
  CHECK(pod_truncation(Vector{0, 0}, 1e-4) == 0);
  CHECK(information_kept(Vector{3, 1}, 1) == doctest::Approx(0.75));
  CHECK(information_kept(Vector{0, 0}, 0) == 1.0);
}

TEST_CASE("POD: duplicate snapshots give rank one") {
  std::deque<Vector> x{{1, 2, 3}, {1, 2, 3}, {1, 2, 3}};
  const PodBasis b = pod_basis(x, 1e-4);
  CHECK(b.k == 1);
  CHECK(b.info_kept == doctest::Approx(1.0));
}

TEST_CASE("POD singular values match Eigen SVD") {
  std::mt19937_64 rng(26);
  const Eigen::MatrixXd x = oracle::random_matrix(rng, 40, 6, 1.0);
  std::deque<Vector> snaps;
  for (int j = 0; j < 6; ++j) snaps.push_back(oracle::stl(x.col(j)));
  const PodBasis b = pod_basis(snaps, 1e-12);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
  for (int i = 0; i < 6; ++i)
    CHECK(b.singular_values[static_cast<std::size_t>(i)] == doctest::Approx(svd.singularValues()(i)).epsilon(1e-10));
  CHECK(b.k == 6);
  CHECK(max_orthogonality_error(b.modes) <= 1e-10);
}

TEST_CASE("POD info kept is nonincreasing in eps") {
  std::mt19937_64 rng(27);
  std::deque<Vector> snaps;
  Vector base = oracle::random_vector(rng, 30);
  for (int j = 0; j < 8; ++j) {
    Vector w = oracle::random_vector(rng, 30);
    scale(std::pow(10.0, -j), w);
    axpy(1.0, base, w);
    snaps.push_back(w);
  }
  double prev = 2.0;
  for (double eps : {1e-12, 1e-8, 1e-6, 1e-4, 1e-2, 0.5}) {
    const double info = pod_basis(snaps, eps).info_kept;
    CHECK(info > 0.0);
    CHECK(info <= 1.0 + 1e-15);
    CHECK(info <= prev + 1e-15);
    prev = info;
  }
}

TEST_CASE("POD start vector: solution in the snapshot span converges in 0 iterations") {
  std::mt19937_64 rng(28);
  const Eigen::MatrixXd kd = oracle::random_spd(rng, 50);
  const CsrMatrix k = oracle::sparse(kd);
  const MatrixOperator op(k);
  const Vector j = oracle::random_vector(rng, 50);
  const Vector xs = oracle::stl(kd.ldlt().solve(oracle::vec(j)));
  SnapshotBuffer buf(10, 1e-4);
  buf.push(oracle::random_vector(rng, 50));
  buf.push(xs);
  buf.push(oracle::random_vector(rng, 50));
  const PodStartVector p = pod_start_vector(buf, j, op);
  CHECK(p.k == 3);
  const auto r = pcg_solve(k, j, p.x0, PcgConfig{1e-8, 0, 100, PreconditionerKind::None});
  CHECK(r.report.iterations == 0);
}

TEST_CASE("POD: zero snapshots and empty buffer") {
  const CsrMatrix k = CsrMatrix::identity(3);
  const MatrixOperator op(k);
  SnapshotBuffer buf;
  CHECK_THROWS(pod_start_vector(buf, Vector{1, 1, 1}, op));
  buf.push(Vector(3, 0.0));
  const auto p = pod_start_vector(buf, Vector{1, 1, 1}, op);
  CHECK(p.k == 0);
  CHECK(p.x0 == Vector(3, 0.0));
}

TEST_CASE("snapshot ring buffer keeps the newest") {
  SnapshotBuffer buf(2);
  buf.push(Vector{1});
  buf.push(Vector{2});
  buf.push(Vector{3});
  REQUIRE(buf.size() == 2);
  CHECK(buf.snapshots().front() == Vector{2});
  CHECK_THROWS(SnapshotBuffer(3, 0.0));
  CHECK_THROWS(SnapshotBuffer(3, 1.0));
}

TEST_CASE("strategies keep per-family histories") {
  const CsrMatrix k = CsrMatrix::from_diagonal(Vector{1, 2, 3, 4});
  const MatrixOperator op(k);
  for (auto kind : {StartStrategyKind::Previous, StartStrategyKind::Cspe, StartStrategyKind::Pod}) {
    StartVectorOptions o;
    o.kind = kind;
    auto s = make_strategy(o, op);
    CHECK(s->kind() == kind);
    const Vector rhs{1, 2, 3, 4};
    CHECK(s->start_vector(RhsFamily::SourceCurrent, rhs) == Vector(4, 0.0));
    s->record(RhsFamily::SourceCurrent, Vector{1, 1, 1, 1});  // exact solution of rhs
    const Vector x = s->start_vector(RhsFamily::SourceCurrent, rhs);
    for (double v : x) CHECK(v == doctest::Approx(1.0));
    CHECK(s->start_vector(RhsFamily::CouplingFromCurrentState, rhs) == Vector(4, 0.0));
    CHECK(s->start_vector(RhsFamily::CouplingFromPreviousState, rhs) == Vector(4, 0.0));
  }
  CHECK(parse_strategy("cspe") == StartStrategyKind::Cspe);
  CHECK(parse_strategy("pod") == StartStrategyKind::Pod);
  CHECK(parse_strategy("previous") == StartStrategyKind::Previous);
  CHECK_THROWS(parse_strategy("spe2"));
}
