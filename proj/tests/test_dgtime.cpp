#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "vemdg/experiments.hpp"
#include "vemdg/mesh_gen.hpp"
#include "vemdg/slab_system.hpp"

using namespace vemdg;
using test::TestRng;

namespace {
const BoundingBox kUnitBox{0, 0, 1, 1};
}

TEST_CASE("temporal matrices: frozen r=1 values on the unit slab") {
  const SlabBasis basis = SlabBasis::make(0.0, 1.0, 1);  // Lagrange nodes {0, 1}
  const TemporalMatrices tm = temporal_matrices(basis);

  CHECK(tm.n1.norm() <= 1e-14);  // second derivatives vanish for r=1

  Eigen::MatrixXd n3_expected(2, 2);
  n3_expected << -0.5, -0.5, 0.5, 0.5;
  CHECK((tm.n3 - n3_expected).norm() <= 1e-14);

  // nodal basis: exactly one function equals 1 at the slab start
  Eigen::MatrixXd n5_expected = Eigen::MatrixXd::Zero(2, 2);
  n5_expected(0, 0) = 1.0;
  CHECK((tm.n5 - n5_expected).norm() <= 1e-14);
}

TEST_CASE("temporal matrices: N2 row sums vanish (constants in the span)") {
  for (int r = 1; r <= 5; ++r) {
    const SlabBasis basis = SlabBasis::make(0.25, 0.75, r);
    const TemporalMatrices tm = temporal_matrices(basis);
    CHECK(tm.n2.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(tm.n3.colwise().sum().cwiseAbs().maxCoeff() <= 1e-12);  // int of d/dt psi_l
  }
}

TEST_CASE("temporal matrices vs symbolic integration oracle, r <= 6") {
  for (int r = 1; r <= 6; ++r) {
    for (const TimeBasisType type : {TimeBasisType::lagrange_lobatto, TimeBasisType::legendre}) {
      const SlabBasis basis = SlabBasis::make(0.3, 0.3 + 0.17, r, type);
      const TemporalMatrices tm = temporal_matrices(basis);
      const Eigen::MatrixXd coeffs = test::monomial_coefficients(basis);
      const double scale = std::pow(2.0 / basis.tau(), 3);
      for (int l = 0; l <= r; ++l)
        for (int m = 0; m <= r; ++m) {
          CHECK(tm.n1(l, m) ==
                doctest::Approx(test::exact_pair_integral(basis, coeffs, m, 2, l, 1))
                    .epsilon(1e-13)
                    .scale(scale));
          CHECK(tm.n2(l, m) ==
                doctest::Approx(test::exact_pair_integral(basis, coeffs, m, 1, l, 1))
                    .epsilon(1e-13)
                    .scale(scale));
          CHECK(tm.n3(l, m) ==
                doctest::Approx(test::exact_pair_integral(basis, coeffs, m, 0, l, 1))
                    .epsilon(1e-13)
                    .scale(scale));
        }
    }
  }
}

TEST_CASE("temporal matrices: upwind coupling blocks") {
  const SlabBasis prev = SlabBasis::make(0.0, 0.5, 2);
  const SlabBasis cur = SlabBasis::make(0.5, 1.0, 3);
  const TemporalMatrices tm = temporal_matrices(cur, &prev);
  REQUIRE(tm.n6.rows() == 4);
  REQUIRE(tm.n6.cols() == 3);
  const Eigen::VectorXd d0 = cur.derivatives(0.5);
  const Eigen::VectorXd dp = prev.derivatives(0.5);
  const Eigen::VectorXd v0 = cur.values(0.5);
  const Eigen::VectorXd vp = prev.values(0.5);
  CHECK((tm.n6 - d0 * dp.transpose()).norm() <= 1e-14 * tm.n6.norm());
  CHECK((tm.n7 - v0 * vp.transpose()).norm() <= 1e-13);
}

TEST_CASE("slab system: zero data gives the zero solution") {
  auto mesh = std::make_shared<PolygonalMesh>(generate_structured(3, 3, kUnitBox));
  const auto space = build_vem_space(mesh, 1);
  const TimePartition partition = TimePartition::uniform_partition(1.0, 4, 2);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(space->n_interior);
  const SpaceTimeSolution sol = march(space, partition, 0.7, LoadFunction{}, zero, zero);
  for (const auto& c : sol.trajectory.coeffs) CHECK(c.norm() == 0.0);
}

TEST_CASE("slab system: 1-interior-DOF space reproduces the damped oscillator") {
  auto mesh = std::make_shared<PolygonalMesh>(generate_structured(2, 2, kUnitBox));
  const auto space = build_vem_space(mesh, 1);
  REQUIRE(space->n_interior == 1);
  const double m = space->mass.coeff(0, 0);
  const double a = space->stiffness.coeff(0, 0);
  const double nu = 0.4;
  const double lambda = a / m;
  const double omega = std::sqrt(lambda - 0.25 * nu * nu);
  const double u0 = 1.3, z0 = -0.2;
  const auto exact = [&](double t) {
    return std::exp(-0.5 * nu * t) *
           (u0 * std::cos(omega * t) + (z0 + 0.5 * nu * u0) / omega * std::sin(omega * t));
  };

  // r=1 slab system is 2x2 and solvable
  {
    const SlabBasis basis = SlabBasis::make(0.0, 0.25, 1);
    const ProjectedLoad load(*space, LoadFunction{});
    const SlabSystem sys = build_slab_system(
        *space, basis, nu, load,
        SlabState{Eigen::VectorXd::Constant(1, u0), Eigen::VectorXd::Constant(1, z0)}, -1);
    CHECK(sys.op.rows() == 2);
    CHECK_NOTHROW(solve_dense(sys.op.materialize(), sys.rhs));
  }

  const auto solve_at = [&](int slabs) {
    const TimePartition partition = TimePartition::uniform_partition(1.0, slabs, 3);
    const SpaceTimeSolution sol =
        march(space, partition, nu, LoadFunction{}, Eigen::VectorXd::Constant(1, u0),
              Eigen::VectorXd::Constant(1, z0));
    return std::abs(sol.trajectory.end_value(slabs - 1)[0] - exact(1.0));
  };
  const double coarse = solve_at(16);
  const double fine = solve_at(64);
  CHECK(fine < 1e-5);
  CHECK(fine < coarse / 4.0);  // at least second-order shrink over 2 halvings
}

TEST_CASE("slab operator equals the direct-quadrature assembly oracle") {
  auto mesh = std::make_shared<PolygonalMesh>(generate_structured(2, 2, kUnitBox));
  const auto space = build_vem_space(mesh, 2);
  const int ns = space->n_interior;
  const double nu = 0.9;
  const SlabBasis basis = SlabBasis::make(0.5, 0.85, 2);
  const ProjectedLoad load(*space, LoadFunction{});
  const SlabSystem sys =
      build_slab_system(*space, basis, nu, load,
                        SlabState{Eigen::VectorXd::Zero(ns), Eigen::VectorXd::Zero(ns)}, -1);
  const Eigen::MatrixXd got = sys.op.materialize();

  // independent path: dense M/A plus 40-point Gauss on every basis pair
  const Eigen::MatrixXd M(space->mass);
  const Eigen::MatrixXd A(space->stiffness);
  const int nt = basis.size();
  const Rule1d rule = map_to_interval(gauss_legendre(40), basis.t0, basis.t1);
  Eigen::MatrixXd n1 = Eigen::MatrixXd::Zero(nt, nt), n2 = n1, n3 = n1;
  for (int q = 0; q < rule.nodes.size(); ++q) {
    const Eigen::VectorXd v = basis.values(rule.nodes[q]);
    const Eigen::VectorXd d = basis.derivatives(rule.nodes[q]);
    const Eigen::VectorXd dd = basis.second_derivatives(rule.nodes[q]);
    n1 += rule.weights[q] * d * dd.transpose();
    n2 += rule.weights[q] * d * d.transpose();
    n3 += rule.weights[q] * d * v.transpose();
  }
  const Eigen::VectorXd v0 = basis.values(basis.t0);
  const Eigen::VectorXd d0 = basis.derivatives(basis.t0);
  Eigen::MatrixXd want(ns * nt, ns * nt);
  for (int i = 0; i < ns; ++i)
    for (int l = 0; l < nt; ++l)
      for (int j = 0; j < ns; ++j)
        for (int m = 0; m < nt; ++m)
          want(i * nt + l, j * nt + m) =
              M(i, j) * (n1(l, m) + nu * n2(l, m) + d0[m] * d0[l]) +
              A(i, j) * (n3(l, m) + v0[m] * v0[l]);
  CHECK((got - want).norm() <= 1e-12 * want.norm());
}

TEST_CASE("march: basis invariance between Lagrange and Legendre") {
  const ManufacturedCase mc = manufactured_case(1.0);
  auto mesh = std::make_shared<PolygonalMesh>(generate_structured(3, 3, kUnitBox));
  const auto space = build_vem_space(mesh, 2);
  const TimePartition partition = TimePartition::uniform_partition(1.0, 4, 2);
  MarchOptions lagrange;
  MarchOptions legendre;
  legendre.basis = TimeBasisType::legendre;
  const SpaceTimeSolution a = solve_vemdg(mc.problem, space, partition, lagrange);
  const SpaceTimeSolution b = solve_vemdg(mc.problem, space, partition, legendre);
  TestRng rng(77);
  double scale = 0.0;
  for (int n = 0; n < 4; ++n) scale = std::max(scale, a.trajectory.end_value(n).norm());
  for (int probe = 0; probe < 20; ++probe) {
    const Eigen::Vector2d x(rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95));
    const double t = rng.uniform(1e-3, 1.0);
    const double va = a.evaluate(x, t);
    const double vb = b.evaluate(x, t);
    CHECK(std::abs(va - vb) <= 1e-8 * std::max(scale, 1e-6));
  }
}

TEST_CASE("march: causality, truncating the load after t_m changes nothing before") {
  const ManufacturedCase mc = manufactured_case(1.0);
  auto mesh = std::make_shared<PolygonalMesh>(generate_structured(3, 3, kUnitBox));
  const auto space = build_vem_space(mesh, 1);
  const TimePartition partition = TimePartition::uniform_partition(1.0, 4, 2);
  const double t_cut = 0.5;  // end of slab 2

  LoadFunction full = mc.problem.load;
  LoadFunction truncated;
  const auto g = full.terms[0].temporal;
  truncated.terms.push_back(
      {full.terms[0].spatial, [g, t_cut](double t) { return t <= t_cut ? g(t) : 0.0; }});

  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(space->n_interior);
  const SpaceTimeSolution a = march(space, partition, 1.0, full, zero, zero);
  const SpaceTimeSolution b = march(space, partition, 1.0, truncated, zero, zero);
  for (int n = 0; n < 2; ++n) {
    REQUIRE(a.trajectory.coeffs[n].size() == b.trajectory.coeffs[n].size());
    CHECK((a.trajectory.coeffs[n] - b.trajectory.coeffs[n]).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK((a.trajectory.coeffs[3] - b.trajectory.coeffs[3]).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("march: inter-slab jumps shrink under time refinement") {
  const ManufacturedCase mc = manufactured_case(1.0);
  auto mesh = std::make_shared<PolygonalMesh>(generate_structured(4, 4, kUnitBox));
  const auto space = build_vem_space(mesh, 2);
  double prev = -1.0;
  for (int slabs : {4, 8, 16, 32}) {
    const TimePartition partition = TimePartition::uniform_partition(1.0, slabs, 2);
    const SpaceTimeSolution sol = solve_vemdg(mc.problem, space, partition);
    double jumps = 0.0;
    for (int n = 0; n + 1 < slabs; ++n) {
      const Eigen::VectorXd jv = sol.trajectory.start_value(n + 1) - sol.trajectory.end_value(n);
      const Eigen::VectorXd jd =
          sol.trajectory.start_derivative(n + 1) - sol.trajectory.end_derivative(n);
      jumps += jv.dot(space->stiffness * jv) + jd.dot(space->mass * jd);
    }
    jumps = std::sqrt(jumps);
    if (prev >= 0.0) CHECK(jumps < prev);
    prev = jumps;
  }
}

TEST_CASE("slab solvers agree across dense, sparse, and kron paths") {
  const ManufacturedCase mc = manufactured_case(1.0);
  auto mesh = std::make_shared<PolygonalMesh>(generate_voronoi_lloyd(30, kUnitBox, 61, 30));
  const auto space = build_vem_space(mesh, 2);
  const TimePartition partition = TimePartition::uniform_partition(1.0, 3, 2);
  std::vector<SpaceTimeSolution> sols;
  for (const SlabSolverKind kind :
       {SlabSolverKind::dense, SlabSolverKind::sparse_lu, SlabSolverKind::kron_diag}) {
    MarchOptions options;
    options.solver = kind;
    sols.push_back(solve_vemdg(mc.problem, space, partition, options));
  }
  const double scale = sols[0].trajectory.end_value(2).norm();
  for (std::size_t i = 1; i < sols.size(); ++i)
    CHECK((sols[i].trajectory.end_value(2) - sols[0].trajectory.end_value(2)).norm() <=
          1e-9 * scale);
}

TEST_CASE("time partition: validation and degree flags") {
  CHECK_THROWS(TimePartition::uniform_partition(0.0, 4, 2));
  CHECK_THROWS(TimePartition::uniform_partition(1.0, 0, 2));
  TimePartition p = TimePartition::uniform_partition(2.0, 5, 2);
  CHECK(!p.has_degree_one());
  CHECK(p.uniform());
  CHECK(p.slab_of(0.0) == 0);
  CHECK(p.slab_of(0.4) == 0);
  CHECK(p.slab_of(0.4000001) == 1);
  CHECK(p.slab_of(2.0) == 4);
  p.degrees[2] = 1;
  CHECK(p.has_degree_one());
  CHECK(!p.uniform());
  p.degrees[2] = 0;
  CHECK_THROWS(p.validate());
}
