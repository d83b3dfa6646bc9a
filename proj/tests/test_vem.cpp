#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <filesystem>

#include "oracles.hpp"
#include "vemdg/mesh_gen.hpp"
#include "vemdg/vem_space.hpp"

using namespace vemdg;
using test::TestRng;

namespace {
const BoundingBox kUnitBox{0, 0, 1, 1};

PolygonalMesh regular_polygon_mesh(int n, double radius = 1.0) {
  std::vector<Eigen::Vector2d> poly;
  for (int i = 0; i < n; ++i)
    poly.emplace_back(radius * std::cos(2.0 * M_PI * i / n),
                      radius * std::sin(2.0 * M_PI * i / n));
  return make_single_cell_mesh(poly);
}

// DOF vector of a polynomial given by scaled-monomial coefficients on the cell.
Eigen::VectorXd dofs_of_polynomial(const LocalVemElement& el, const Eigen::VectorXd& coeffs) {
  return el.dof_of_mono * coeffs;
}
}  // namespace

TEST_CASE("pi_nabla: polynomial reproduction") {
  const PolygonalMesh square = generate_structured(1, 1, kUnitBox);
  const LocalVemElement el1 = build_local_element(square, 0, 1);
  // w = 2x - 3y + 0.5 expressed in the scaled basis
  Eigen::VectorXd linear(3);
  const double h = el1.basis.h;
  linear << 0.5 + 2 * el1.basis.center.x() - 3 * el1.basis.center.y(), 2 * h, -3 * h;
  const Eigen::VectorXd reproduced = el1.pi_nabla * dofs_of_polynomial(el1, linear);
  CHECK((reproduced - linear).norm() <= 1e-13 * linear.norm());

  // k=2, w = x^2 - y^2 on a regular hexagon
  const PolygonalMesh hex = regular_polygon_mesh(6);
  const LocalVemElement el2 = build_local_element(hex, 0, 2);
  Eigen::VectorXd saddle = Eigen::VectorXd::Zero(6);
  const double h2 = el2.basis.h * el2.basis.h;
  saddle[ScaledMonomialBasis::index(2, 0)] = h2;
  saddle[ScaledMonomialBasis::index(0, 2)] = -h2;
  // (centroid at the origin, so no lower-order terms appear)
  const Eigen::VectorXd got = el2.pi_nabla * dofs_of_polynomial(el2, saddle);
  CHECK((got - saddle).norm() <= 1e-12 * saddle.norm());

  // constants are fixed by the mean constraint
  Eigen::VectorXd ones = Eigen::VectorXd::Zero(6);
  ones[0] = 1.0;
  const Eigen::VectorXd constant = el2.pi_nabla * dofs_of_polynomial(el2, ones);
  CHECK((constant - ones).norm() <= 1e-13);
}

TEST_CASE("pi_zero: polynomial reproduction and moment bookkeeping") {
  const PolygonalMesh square = generate_structured(1, 1, kUnitBox);
  const LocalVemElement el = build_local_element(square, 0, 2);

  Eigen::VectorXd ones = Eigen::VectorXd::Zero(6);
  ones[0] = 1.0;
  CHECK((el.pi_zero * dofs_of_polynomial(el, ones) - ones).norm() <= 1e-13);

  // w = xy about the centroid: xy = (sx*h + cx)(sy*h + cy)
  const double h = el.basis.h;
  const Eigen::Vector2d c = el.basis.center;
  Eigen::VectorXd xy = Eigen::VectorXd::Zero(6);
  xy[ScaledMonomialBasis::index(0, 0)] = c.x() * c.y();
  xy[ScaledMonomialBasis::index(1, 0)] = h * c.y();
  xy[ScaledMonomialBasis::index(0, 1)] = h * c.x();
  xy[ScaledMonomialBasis::index(1, 1)] = h * h;
  const Eigen::VectorXd got = el.pi_zero * dofs_of_polynomial(el, xy);
  CHECK((got - xy).norm() <= 1e-12 * xy.norm());

  // random virtual function: moments of Pi0 w against P_{k-2} match the DOFs
  TestRng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd w(el.n_dofs);
    for (int i = 0; i < w.size(); ++i) w[i] = rng.uniform(-1.0, 1.0);
    const Eigen::VectorXd pi0 = el.pi_zero * w;
    const int nm = el.n_moment_dofs();
    const Eigen::VectorXd moments = el.mono_mass.topRows(nm) * pi0;  // int Pi0w m_b
    for (int b = 0; b < nm; ++b)
      CHECK(moments[b] ==
            doctest::Approx(el.area_ * w[el.moment_dof_offset() + b]).epsilon(1e-11));
  }
}

TEST_CASE("local forms: mass consistency on constants, stiffness kernel") {
  TestRng rng(5);
  for (int k = 1; k <= 3; ++k) {
    const auto poly = test::random_polygon(rng);
    const PolygonalMesh mesh = make_single_cell_mesh(poly);
    const auto [a_h, m_h] = local_forms(mesh, 0, k);
    const LocalVemElement el = build_local_element(mesh, 0, k);

    Eigen::VectorXd ones_coeffs = Eigen::VectorXd::Zero(el.basis.size());
    ones_coeffs[0] = 1.0;
    const Eigen::VectorXd one_dofs = dofs_of_polynomial(el, ones_coeffs);
    CHECK(one_dofs.dot(m_h * one_dofs) ==
          doctest::Approx(mesh.geometry[0].area).epsilon(1e-12));
    // stabilization vanishes on polynomial DOF vectors
    CHECK(one_dofs.dot(el.stab_mass * one_dofs) <= 1e-12 * mesh.geometry[0].area);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a_h);
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    CHECK(std::abs(es.eigenvalues()[0]) <= 1e-11 * scale);  // the constant mode
    for (int i = 1; i < es.eigenvalues().size(); ++i)
      CHECK(es.eigenvalues()[i] > 1e-11 * scale);
  }
}

TEST_CASE("k-consistency against the quadrature oracle") {
  TestRng rng(7);
  for (int trial = 0; trial < 12; ++trial) {
    const int k = rng.integer(1, 4);
    const auto poly = test::random_polygon(rng);
    const PolygonalMesh mesh = make_single_cell_mesh(poly);
    const LocalVemElement el = build_local_element(mesh, 0, k);

    Eigen::VectorXd q_coeffs(el.basis.size());
    Eigen::VectorXd w(el.n_dofs);
    for (int i = 0; i < q_coeffs.size(); ++i) q_coeffs[i] = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < w.size(); ++i) w[i] = rng.uniform(-1.0, 1.0);
    const Eigen::VectorXd q_dofs = dofs_of_polynomial(el, q_coeffs);

    const double a_got = q_dofs.dot(el.stiffness * w);
    const double a_want = test::a_form_oracle(mesh, 0, k, q_coeffs, w, el);
    const double a_scale = std::max({std::abs(a_want), el.stiffness.norm(), 1.0});
    CHECK(std::abs(a_got - a_want) <= 1e-10 * a_scale);

    const double m_got = q_dofs.dot(el.mass * w);
    const double m_want = test::m_form_oracle(mesh, 0, k, q_coeffs, w, el);
    const double m_scale = std::max({std::abs(m_want), el.mass.norm(), 1.0});
    CHECK(std::abs(m_got - m_want) <= 1e-10 * m_scale);
  }
}

TEST_CASE("stabilizations are SPD on the non-polynomial complement") {
  TestRng rng(9);
  const auto poly = test::random_polygon(rng);
  const PolygonalMesh mesh = make_single_cell_mesh(poly);
  for (int k = 1; k <= 3; ++k) {
    const LocalVemElement el = build_local_element(mesh, 0, k);
    const int nk = el.basis.size();
    for (const Eigen::MatrixXd& stab : {el.stab_stiffness, el.stab_mass}) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(stab);
      const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
      int zeros = 0;
      for (int i = 0; i < es.eigenvalues().size(); ++i) {
        if (std::abs(es.eigenvalues()[i]) <= 1e-10 * scale)
          ++zeros;
        else
          CHECK(es.eigenvalues()[i] > 0.0);
      }
      // kernel is exactly the polynomial subspace (dimension (k+1)(k+2)/2)
      CHECK(zeros == nk);
    }
  }
}

TEST_CASE("assemble_global: interior DOF counts") {
  auto one_cell = std::make_shared<PolygonalMesh>(generate_structured(1, 1, kUnitBox));
  CHECK(build_vem_space(one_cell, 1)->n_interior == 0);

  auto grid22 = std::make_shared<PolygonalMesh>(generate_structured(2, 2, kUnitBox));
  CHECK(build_vem_space(grid22, 1)->n_interior == 1);

  auto grid44 = std::make_shared<PolygonalMesh>(generate_structured(4, 4, kUnitBox));
  const auto space = build_vem_space(grid44, 2);
  // interior vertices + interior edges (k-1 each) + one moment per cell
  const int expected = 9 + 24 + 16;
  CHECK(space->n_interior == expected);
  CHECK(space->n_total == 25 + 40 + 16);
}

TEST_CASE("global matrices: projector identity on global polynomials") {
  auto mesh = std::make_shared<PolygonalMesh>(generate_voronoi_lloyd(40, kUnitBox, 21, 30));
  for (int k = 1; k <= 3; ++k) {
    const auto space = build_vem_space(mesh, k);
    // p(x, y) of total degree k with nonzero everything
    const auto p = [k](const Eigen::Vector2d& x) {
      double value = 1.0 + 0.5 * x.x() - 0.25 * x.y();
      if (k >= 2) value += 0.75 * x.x() * x.y() - 0.5 * x.y() * x.y();
      if (k >= 3) value += 0.25 * x.x() * x.x() * x.y();
      return value;
    };
    const Eigen::VectorXd dofs = interpolate(*space, p);
    TestRng rng(31);
    int hint = -1;
    for (int trial = 0; trial < 30; ++trial) {
      const Eigen::Vector2d x(rng.uniform(), rng.uniform());
      const int cell = locate_point(*mesh, x);
      const Eigen::VectorXd pi = cell_projection(*space, cell, dofs);
      CHECK(pi.dot(space->elements[cell].basis.values(x)) ==
            doctest::Approx(p(x)).epsilon(1e-11));
      // pi_nabla reproduces too
      Eigen::VectorXd local(space->elements[cell].n_dofs);
      for (int i = 0; i < local.size(); ++i) local[i] = dofs[space->cell_dofs[cell][i]];
      const Eigen::VectorXd pin = space->elements[cell].pi_nabla * local;
      CHECK(pin.dot(space->elements[cell].basis.values(x)) ==
            doctest::Approx(p(x)).epsilon(1e-11));
      (void)hint;
    }
  }
}

TEST_CASE("global stiffness annihilates exactly the constants") {
  auto mesh = std::make_shared<PolygonalMesh>(generate_voronoi_lloyd(30, kUnitBox, 33, 30));
  const auto space = build_vem_space(mesh, 2);
  const Eigen::VectorXd ones = interpolate(*space, [](const Eigen::Vector2d&) { return 1.0; });
  const double scale = Eigen::MatrixXd(space->stiffness_full).cwiseAbs().maxCoeff();
  CHECK((space->stiffness_full * ones).norm() <= 1e-10 * scale * ones.norm());
  // rank deficiency is exactly one
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(space->stiffness_full)};
  CHECK(std::abs(es.eigenvalues()[0]) <= 1e-10 * scale);
  CHECK(es.eigenvalues()[1] > 1e-10 * scale);
}

TEST_CASE("interpolate: zero, polynomials, and the sin-sin decay proxy") {
  auto mesh = std::make_shared<PolygonalMesh>(generate_voronoi_lloyd(25, kUnitBox, 41, 30));
  const auto space = build_vem_space(mesh, 2);
  const Eigen::VectorXd zero = interpolate(*space, [](const Eigen::Vector2d&) { return 0.0; });
  CHECK(zero.norm() == 0.0);

  // H1-seminorm proxy |grad(Pi_nabla u_I) - grad u| decays like h^k for k=2
  const auto u = [](const Eigen::Vector2d& x) {
    return std::sin(M_PI * x.x()) * std::sin(M_PI * x.y());
  };
  const auto grad_u = [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(M_PI * std::cos(M_PI * x.x()) * std::sin(M_PI * x.y()),
                           M_PI * std::sin(M_PI * x.x()) * std::cos(M_PI * x.y()));
  };
  std::vector<std::pair<double, double>> pairs;
  for (int n : {4, 8, 16}) {
    auto grid = std::make_shared<PolygonalMesh>(generate_structured(n, n, kUnitBox));
    const auto sp = build_vem_space(grid, 2);
    const Eigen::VectorXd dofs = interpolate(*sp, u);
    double err_sq = 0.0;
    for (int c = 0; c < grid->n_cells(); ++c) {
      const auto& el = sp->elements[c];
      Eigen::VectorXd local(el.n_dofs);
      for (int i = 0; i < el.n_dofs; ++i) local[i] = dofs[sp->cell_dofs[c][i]];
      const Eigen::VectorXd pin = el.pi_nabla * local;
      for (int q = 0; q < el.quadrature.size(); ++q) {
        const Eigen::Vector2d g =
            el.basis.gradients(el.quadrature.nodes[q]).transpose() * pin;
        err_sq += el.quadrature.weights[q] *
                  (g - grad_u(el.quadrature.nodes[q])).squaredNorm();
      }
    }
    pairs.emplace_back(1.0 / n, std::sqrt(err_sq));
  }
  const double slope = std::log(pairs[0].second / pairs[2].second) /
                       std::log(pairs[0].first / pairs[2].first);
  CHECK(slope > 1.6);
  CHECK(slope < 2.4);
}

TEST_CASE("project_load: zero, partition of unity, polynomial exactness") {
  auto grid = std::make_shared<PolygonalMesh>(generate_structured(2, 2, kUnitBox));
  const auto space = build_vem_space(grid, 1);
  CHECK(project_load_full(*space, [](const Eigen::Vector2d&) { return 0.0; }).norm() == 0.0);

  // f = 1: sum_i F_i = integral of the partition of unity = |Omega|
  const Eigen::VectorXd f1 = project_load_full(*space, [](const Eigen::Vector2d&) { return 1.0; });
  CHECK(f1.sum() == doctest::Approx(1.0).epsilon(1e-12));

  // Pi0 reproduces P_k, so the projected load of a polynomial is exact
  auto voro = std::make_shared<PolygonalMesh>(generate_voronoi_lloyd(20, kUnitBox, 51, 30));
  const auto sp2 = build_vem_space(voro, 2);
  const auto f = [](const Eigen::Vector2d& x) { return 1.0 + x.x() - 2.0 * x.y() + x.x() * x.y(); };
  for (int c = 0; c < voro->n_cells(); ++c) {
    const auto& el = sp2->elements[c];
    Eigen::VectorXd b = Eigen::VectorXd::Zero(el.basis.size());
    for (int q = 0; q < el.quadrature.size(); ++q)
      b += el.quadrature.weights[q] * f(el.quadrature.nodes[q]) *
           el.basis.values(el.quadrature.nodes[q]);
    const Eigen::VectorXd coeffs = el.mono_mass.llt().solve(b);
    TestRng rng(61);
    for (int probe = 0; probe < 3; ++probe) {
      // sample inside the cell by shrinking toward the centroid
      const Eigen::Vector2d x =
          el.basis.center + 0.3 * rng.uniform() *
                                (voro->vertices[voro->cells[c][0]] - el.basis.center);
      CHECK(coeffs.dot(el.basis.values(x)) == doctest::Approx(f(x)).epsilon(1e-11));
    }
  }
}

TEST_CASE("dof map csv and matrix market dumps are writable") {
  auto grid = std::make_shared<PolygonalMesh>(generate_structured(2, 2, kUnitBox));
  const auto space = build_vem_space(grid, 2);
  const auto tmp = std::filesystem::temp_directory_path();
  write_dof_map_csv((tmp / "vemdg_dofs.csv").string(), *space);
  write_matrix_market((tmp / "vemdg_mass.mtx").string(), space->mass);
  CHECK(std::filesystem::file_size(tmp / "vemdg_dofs.csv") > 0);
  CHECK(std::filesystem::file_size(tmp / "vemdg_mass.mtx") > 0);
  std::filesystem::remove(tmp / "vemdg_dofs.csv");
  std::filesystem::remove(tmp / "vemdg_mass.mtx");
}
