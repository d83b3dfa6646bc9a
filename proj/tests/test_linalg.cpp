#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "vemdg/linalg.hpp"

using namespace vemdg;
using test::TestRng;

namespace {
std::shared_ptr<const SparseMatrixd> sparse_of(const Eigen::MatrixXd& dense) {
  auto m = std::make_shared<SparseMatrixd>(dense.rows(), dense.cols());
  std::vector<Tripletd> trips;
  for (int i = 0; i < dense.rows(); ++i)
    for (int j = 0; j < dense.cols(); ++j)
      if (dense(i, j) != 0.0) trips.emplace_back(i, j, dense(i, j));
  m->setFromTriplets(trips.begin(), trips.end());
  return m;
}

Eigen::MatrixXd random_spd(TestRng& rng, int n, double shift) {
  Eigen::MatrixXd B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = rng.uniform(-1.0, 1.0);
  return B * B.transpose() + shift * Eigen::MatrixXd::Identity(n, n);
}
}  // namespace

TEST_CASE("assemble: duplicates summed, zeros pruned") {
  const SparseMatrixd m = assemble_sparse_symmetric(2, {{0, 0, 1.0}, {0, 0, 1.0}});
  CHECK(m.coeff(0, 0) == 2.0);
  CHECK(m.nonZeros() == 1);
}

TEST_CASE("assemble: asymmetry reported with the worst entry") {
  CHECK_THROWS_WITH_AS(assemble_sparse_symmetric(2, {{0, 1, 3.0}}), doctest::Contains("asymmetry"),
                       LinalgError);
  CHECK_THROWS_AS(assemble_sparse_symmetric(2, {{0, 5, 1.0}, {5, 0, 1.0}}), LinalgError);
}

TEST_CASE("assemble: element-loop grid Laplacian matches dense assembly") {
  // 2x2 grid of bilinear quads on the unit square, element matrices assembled
  // both through triplets and through a dense accumulation oracle
  const double k_local[4][4] = {{2 / 3.0, -1 / 6.0, -1 / 3.0, -1 / 6.0},
                                {-1 / 6.0, 2 / 3.0, -1 / 6.0, -1 / 3.0},
                                {-1 / 3.0, -1 / 6.0, 2 / 3.0, -1 / 6.0},
                                {-1 / 6.0, -1 / 3.0, -1 / 6.0, 2 / 3.0}};
  const int cells[4][4] = {{0, 1, 4, 3}, {1, 2, 5, 4}, {3, 4, 7, 6}, {4, 5, 8, 7}};
  std::vector<Tripletd> trips;
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(9, 9);
  for (const auto& cell : cells)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        trips.emplace_back(cell[i], cell[j], k_local[i][j]);
        dense(cell[i], cell[j]) += k_local[i][j];
      }
  const SparseMatrixd m = assemble_sparse_symmetric(9, trips);
  CHECK((Eigen::MatrixXd(m) - dense).norm() <= 1e-14 * dense.norm());
}

TEST_CASE("solve_dense: frozen small cases and residual contract") {
  const Eigen::VectorXd b = Eigen::Vector3d(1, 2, 3);
  CHECK((solve_dense(Eigen::Matrix3d::Identity(), b) - b).norm() == 0.0);

  Eigen::MatrixXd A(2, 2);
  A << 2, 1, 1, 2;
  const Eigen::VectorXd x = solve_dense(A, Eigen::Vector2d(3, 3));
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));

  TestRng rng(7);
  const Eigen::MatrixXd S = random_spd(rng, 50, 1.0);
  Eigen::VectorXd rhs(50);
  for (int i = 0; i < 50; ++i) rhs[i] = rng.uniform(-1.0, 1.0);
  const Eigen::VectorXd sol = solve_dense(S, rhs);
  CHECK((S * sol - rhs).norm() <= 1e-10 * (S.norm() * sol.norm() + rhs.norm()));

  Eigen::MatrixXd singular = Eigen::MatrixXd::Zero(3, 3);
  singular(0, 0) = 1.0;
  CHECK_THROWS_AS(solve_dense(singular, Eigen::Vector3d(1, 1, 1)), LinalgError);
}

TEST_CASE("kronecker: identity patterns and definition oracle") {
  TestRng rng(11);
  Eigen::MatrixXd T(3, 3);
  for (int i = 0; i < 9; ++i) T(i / 3, i % 3) = rng.uniform(-1.0, 1.0);

  KroneckerOperator id_kron;
  id_kron.terms.push_back({sparse_of(Eigen::MatrixXd::Identity(2, 2)), T});
  const Eigen::MatrixXd block_diag = id_kron.materialize();
  CHECK((block_diag.block(0, 0, 3, 3) - T).norm() == 0.0);
  CHECK((block_diag.block(3, 3, 3, 3) - T).norm() == 0.0);
  CHECK(block_diag.block(0, 3, 3, 3).norm() == 0.0);

  Eigen::MatrixXd S(3, 3);
  for (int i = 0; i < 9; ++i) S(i / 3, i % 3) = rng.uniform(-1.0, 1.0);
  KroneckerOperator s_kron;
  s_kron.terms.push_back({sparse_of(S), Eigen::MatrixXd::Identity(4, 4)});
  const Eigen::MatrixXd expanded = s_kron.materialize();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK((expanded.block(4 * i, 4 * j, 4, 4) - S(i, j) * Eigen::MatrixXd::Identity(4, 4))
                .norm() == 0.0);

  // random S (x) T against the index-by-index definition with the
  // spatial-major ordering contract
  Eigen::MatrixXd T2(4, 4);
  for (int i = 0; i < 16; ++i) T2(i / 4, i % 4) = rng.uniform(-1.0, 1.0);
  KroneckerOperator op;
  op.terms.push_back({sparse_of(S), T2});
  const Eigen::MatrixXd got = op.materialize();
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 4; ++l)
      for (int j = 0; j < 3; ++j)
        for (int m = 0; m < 4; ++m)
          CHECK(got(i * 4 + l, j * 4 + m) == doctest::Approx(S(i, j) * T2(l, m)).epsilon(1e-15));
}

TEST_CASE("kronecker: apply equals materialized application") {
  TestRng rng(13);
  const int ns = 17, nt = 4;
  KroneckerOperator op;
  for (int term = 0; term < 2; ++term) {
    Eigen::MatrixXd S = random_spd(rng, ns, 0.5);
    Eigen::MatrixXd T(nt, nt);
    for (int i = 0; i < nt * nt; ++i) T(i / nt, i % nt) = rng.uniform(-1.0, 1.0);
    op.terms.push_back({sparse_of(S), T});
  }
  Eigen::VectorXd x(ns * nt);
  for (int i = 0; i < x.size(); ++i) x[i] = rng.uniform(-1.0, 1.0);
  const Eigen::VectorXd direct = op.materialize() * x;
  const Eigen::VectorXd structured = op.apply(x);
  CHECK((direct - structured).norm() <= 1e-12 * direct.norm());

  const SparseMatrixd sparse = op.materialize_sparse();
  CHECK((sparse * x - direct).norm() <= 1e-12 * direct.norm());

  KroneckerOperator bad;
  bad.terms.push_back({sparse_of(Eigen::MatrixXd::Identity(2, 2)), Eigen::MatrixXd::Identity(3, 3)});
  bad.terms.push_back({sparse_of(Eigen::MatrixXd::Identity(3, 3)), Eigen::MatrixXd::Identity(3, 3)});
  CHECK_THROWS_AS(bad.apply(Eigen::VectorXd::Zero(6)), LinalgError);
}

TEST_CASE("generalized_eigh: frozen cases") {
  const auto I3 = sparse_of(Eigen::MatrixXd::Identity(3, 3));
  const GeneralizedEig same = generalized_eigh(*I3, *I3);
  for (int i = 0; i < 3; ++i) CHECK(same.values[i] == doctest::Approx(1.0).epsilon(1e-14));

  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
  diag(0, 0) = 1.0;
  diag(1, 1) = 4.0;
  const GeneralizedEig d = generalized_eigh(*sparse_of(diag), *sparse_of(Eigen::MatrixXd::Identity(2, 2)));
  CHECK(d.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.values[1] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(std::abs(d.vectors(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(d.vectors(1, 1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("generalized_eigh: 1D Laplacian analytic spectrum") {
  const int n = 20;
  const double h = 1.0 / (n + 1);
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    lap(i, i) = 2.0 / (h * h);
    if (i > 0) lap(i, i - 1) = -1.0 / (h * h);
    if (i + 1 < n) lap(i, i + 1) = -1.0 / (h * h);
  }
  const GeneralizedEig eig = generalized_eigh(*sparse_of(lap), *sparse_of(Eigen::MatrixXd::Identity(n, n)));
  for (int m = 1; m <= n; ++m) {
    const double analytic = 4.0 * std::pow(std::sin(m * M_PI / (2.0 * (n + 1))), 2) / (h * h);
    CHECK(std::abs(eig.values[m - 1] - analytic) <= 1e-10 * analytic);
  }
}

TEST_CASE("generalized_eigh property: residual, M-orthonormality, order") {
  TestRng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = rng.integer(5, 200);
    const Eigen::MatrixXd A = random_spd(rng, n, 0.0);
    const Eigen::MatrixXd M = random_spd(rng, n, 0.5);
    const GeneralizedEig eig = generalized_eigh(*sparse_of(A), *sparse_of(M));
    const Eigen::MatrixXd residual =
        A * eig.vectors - M * eig.vectors * eig.values.asDiagonal();
    CHECK(residual.norm() <= 1e-8 * A.norm());
    const Eigen::MatrixXd gram = eig.vectors.transpose() * M * eig.vectors;
    CHECK((gram - Eigen::MatrixXd::Identity(n, n)).norm() <= 1e-10 * n);
    for (int i = 1; i < n; ++i) CHECK(eig.values[i] >= eig.values[i - 1]);
  }
}

TEST_CASE("generalized_eigh: rejects indefinite M") {
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(2, 2);
  M(1, 1) = -1.0;
  CHECK_THROWS_AS(generalized_eigh(*sparse_of(Eigen::MatrixXd::Identity(2, 2)), *sparse_of(M)),
                  LinalgError);
}
