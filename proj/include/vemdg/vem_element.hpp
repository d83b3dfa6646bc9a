#pragma once

#include <Eigen/Dense>

#include <vector>

#include "vemdg/geometry.hpp"
#include "vemdg/monomials.hpp"

namespace vemdg {

class VemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Degree-k enhanced virtual element on one polygon.
///
/// Local DOF ordering: vertex values in loop order, then the k-1 interior
/// Gauss-Lobatto values per loop edge (in traversal direction), then the
/// moments (1/|E|) int_E w m_a for |a| <= k-2 in monomial order. The moment
/// normalization by |E| keeps DOF magnitudes O(1).
struct LocalVemElement {
  int cell = -1;
  int degree = 1;
  int n_vertices = 0;
  int n_dofs = 0;  // N_E = n_E k + k(k-1)/2
  ScaledMonomialBasis basis;

  Eigen::MatrixXd mono_mass;       // H_ab = int_E m_a m_b
  Eigen::MatrixXd mono_stiffness;  // G_ab = int_E grad m_a . grad m_b
  Eigen::MatrixXd dof_of_mono;     // D_ia = dof_i(m_a)

  Eigen::MatrixXd pi_nabla;  // DOFs -> coefficients of the energy projection
  Eigen::MatrixXd pi_zero;   // DOFs -> coefficients of the L2 projection

  Eigen::MatrixXd stiffness;       // a_h^E (consistency + dofi-dofi)
  Eigen::MatrixXd mass;            // m_h^E (consistency + |E|-weighted dofi-dofi)
  Eigen::MatrixXd stab_stiffness;  // S-part of a_h^E
  Eigen::MatrixXd stab_mass;       // R-part of m_h^E

  QuadratureRule quadrature;  // order 2k+2 fan rule, reused by load/interp

  double area() const { return mono_mass(0, 0) != 0 ? area_ : 0.0; }
  double area_ = 0.0;

  static int local_dof_count(int n_vertices, int k) {
    return n_vertices * k + k * (k - 1) / 2;
  }
  int n_moment_dofs() const { return degree * (degree - 1) / 2; }
  int moment_dof_offset() const { return n_vertices * degree; }

  /// Coordinates of the point-valued DOFs (vertices + edge nodes).
  const std::vector<Eigen::Vector2d>& point_dofs() const { return point_dofs_; }
  std::vector<Eigen::Vector2d> point_dofs_;
};

LocalVemElement build_local_element(const PolygonalMesh& mesh, int cell, int k);

/// Projector matrices alone (DOFs -> scaled-monomial coefficients).
Eigen::MatrixXd build_pi_nabla(const PolygonalMesh& mesh, int cell, int k);
Eigen::MatrixXd build_pi_zero(const PolygonalMesh& mesh, int cell, int k);

/// (a_h^E, m_h^E) for one cell.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> local_forms(const PolygonalMesh& mesh, int cell,
                                                        int k);

}  // namespace vemdg
