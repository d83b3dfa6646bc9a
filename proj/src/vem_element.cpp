#include "vemdg/vem_element.hpp"

#include <cmath>

namespace vemdg {

namespace {

// Local DOF id of the j-th Gauss-Lobatto node (0..k) on loop edge i.
int boundary_dof_id(int n_vertices, int k, int edge, int node) {
  if (node == 0) return edge;
  if (node == k) return (edge + 1) % n_vertices;
  return n_vertices + edge * (k - 1) + (node - 1);
}

}  // namespace

LocalVemElement build_local_element(const PolygonalMesh& mesh, int cell, int k) {
  if (k < 1) throw VemError("build_local_element: degree must be >= 1");
  const auto& loop = mesh.cells[cell];
  const auto& geom = mesh.geometry[cell];
  const int n = static_cast<int>(loop.size());

  LocalVemElement el;
  el.cell = cell;
  el.degree = k;
  el.n_vertices = n;
  el.n_dofs = LocalVemElement::local_dof_count(n, k);
  el.area_ = geom.area;
  el.basis = ScaledMonomialBasis{geom.centroid, geom.diameter, k};
  const int nk = el.basis.size();
  const int nm = el.n_moment_dofs();  // dim P_{k-2}
  const int mom0 = el.moment_dof_offset();

  el.quadrature = polygon_quadrature(mesh, cell, 2 * k + 2);

  // monomial Gram matrices by quadrature (exact at this order)
  el.mono_mass.setZero(nk, nk);
  el.mono_stiffness.setZero(nk, nk);
  for (int q = 0; q < el.quadrature.size(); ++q) {
    const double w = el.quadrature.weights[q];
    const Eigen::VectorXd v = el.basis.values(el.quadrature.nodes[q]);
    const auto g = el.basis.gradients(el.quadrature.nodes[q]);
    el.mono_mass.noalias() += w * v * v.transpose();
    el.mono_stiffness.noalias() += w * g * g.transpose();
  }

  // point-valued DOF coordinates: vertices, then edge interior nodes
  el.point_dofs_.clear();
  for (int i = 0; i < n; ++i) el.point_dofs_.push_back(mesh.vertices[loop[i]]);
  std::vector<QuadratureRule> edge_rules(n);
  for (int i = 0; i < n; ++i) {
    edge_rules[i] = edge_gauss_lobatto(mesh.vertices[loop[i]], mesh.vertices[loop[(i + 1) % n]], k);
    for (int j = 1; j < k; ++j) el.point_dofs_.push_back(edge_rules[i].nodes[j]);
  }

  // D_ia = dof_i(m_a)
  el.dof_of_mono.setZero(el.n_dofs, nk);
  for (int i = 0; i < mom0; ++i)
    el.dof_of_mono.row(i) = el.basis.values(el.point_dofs_[i]).transpose();
  for (int b = 0; b < nm; ++b)
    el.dof_of_mono.row(mom0 + b) = el.mono_mass.row(b) / geom.area;

  // B_ai = a^E(m_a, phi_i) via integration by parts; the boundary part uses the
  // Gauss-Lobatto rule whose nodes coincide with the boundary DOFs.
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nk, el.n_dofs);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& normal = geom.edge_normals[i];
    for (int j = 0; j <= k; ++j) {
      const int dof = boundary_dof_id(n, k, i, j);
      const Eigen::VectorXd dn = el.basis.gradients(edge_rules[i].nodes[j]) * normal;
      B.col(dof) += edge_rules[i].weights[j] * dn;
    }
  }
  if (k >= 2) {
    const Eigen::MatrixXd lap = el.basis.laplacian_map();  // nm x nk
    B.block(0, mom0, nk, nm) -= geom.area * lap.transpose();
  }

  // constant fixing: vertex average for k=1, cell mean (moment 0) for k>=2
  Eigen::MatrixXd G_fixed = el.mono_stiffness;
  B.row(0).setZero();
  if (k == 1) {
    for (int i = 0; i < n; ++i) B(0, i) = 1.0 / n;
    G_fixed.row(0) = el.dof_of_mono.topRows(n).colwise().mean();
  } else {
    B(0, mom0) = 1.0;
    G_fixed.row(0) = el.mono_mass.row(0) / geom.area;
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(G_fixed);
  el.pi_nabla = lu.solve(B);
  const Eigen::MatrixXd nabla_residual = B - G_fixed * el.pi_nabla;
  el.pi_nabla += lu.solve(nabla_residual);  // one refinement step
  if (!el.pi_nabla.allFinite() ||
      (G_fixed * el.pi_nabla - B).norm() > 1e-8 * std::max(1.0, B.norm()))
    throw VemError("build_local_element: singular projection system on cell " +
                   std::to_string(cell));

  // C_ai = int_E m_a phi_i: direct moments for |a| <= k-2, the enhancement
  // constraint (w - Pi_nabla w  orthogonal to  P_k / P_{k-2}) for the rest
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(nk, el.n_dofs);
  for (int b = 0; b < nm; ++b) C(b, mom0 + b) = geom.area;
  const Eigen::MatrixXd h_pi = el.mono_mass * el.pi_nabla;
  Eigen::LLT<Eigen::MatrixXd> low_llt;
  if (nm > 0) low_llt.compute(el.mono_mass.topLeftCorner(nm, nm));
  for (int a = nm; a < nk; ++a) {
    C.row(a) = h_pi.row(a);
    if (nm > 0) {
      const Eigen::VectorXd p = low_llt.solve(el.mono_mass.block(0, a, nm, 1));
      for (int b = 0; b < nm; ++b) {
        C(a, mom0 + b) += p[b] * geom.area;
        C.row(a) -= p[b] * h_pi.row(b);
      }
    }
  }
  const Eigen::LLT<Eigen::MatrixXd> h_llt = el.mono_mass.llt();
  el.pi_zero = h_llt.solve(C);
  const Eigen::MatrixXd zero_residual = C - el.mono_mass * el.pi_zero;
  el.pi_zero += h_llt.solve(zero_residual);

  // stabilized forms; S is the plain dofi-dofi product, R carries the |E| weight
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(el.n_dofs, el.n_dofs);
  const Eigen::MatrixXd res_nabla = id - el.dof_of_mono * el.pi_nabla;
  const Eigen::MatrixXd res_zero = id - el.dof_of_mono * el.pi_zero;
  el.stab_stiffness = res_nabla.transpose() * res_nabla;
  el.stab_mass = geom.area * res_zero.transpose() * res_zero;

  el.stiffness = el.pi_nabla.transpose() * el.mono_stiffness * el.pi_nabla + el.stab_stiffness;
  el.mass = el.pi_zero.transpose() * el.mono_mass * el.pi_zero + el.stab_mass;
  el.stiffness = 0.5 * (el.stiffness + el.stiffness.transpose()).eval();
  el.mass = 0.5 * (el.mass + el.mass.transpose()).eval();
  return el;
}

Eigen::MatrixXd build_pi_nabla(const PolygonalMesh& mesh, int cell, int k) {
  return build_local_element(mesh, cell, k).pi_nabla;
}

Eigen::MatrixXd build_pi_zero(const PolygonalMesh& mesh, int cell, int k) {
  return build_local_element(mesh, cell, k).pi_zero;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> local_forms(const PolygonalMesh& mesh, int cell,
                                                        int k) {
  const LocalVemElement el = build_local_element(mesh, cell, k);
  return {el.stiffness, el.mass};
}

}  // namespace vemdg
