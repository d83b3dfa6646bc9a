#pragma once

#include <functional>
#include <memory>

#include "vemdg/linalg.hpp"
#include "vemdg/vem_element.hpp"

namespace vemdg {

using ScalarField = std::function<double(const Eigen::Vector2d&)>;

/// Global degree-k enhanced VE space with homogeneous Dirichlet conditions.
///
/// Global DOF ordering: vertex values (n_V), then edge interior nodes
/// ((k-1) per edge, ordered from the lower to the higher vertex index), then
/// cell moments (k(k-1)/2 per cell).
struct VemSpace {
  std::shared_ptr<const PolygonalMesh> mesh;
  int degree = 1;
  int n_total = 0;
  int n_interior = 0;

  std::vector<LocalVemElement> elements;
  std::vector<std::vector<int>> cell_dofs;  // local -> global
  std::vector<char> dof_on_boundary;
  std::vector<int> interior_of_global;  // -1 for boundary DOFs
  std::vector<int> global_of_interior;

  SparseMatrixd mass_full, stiffness_full;  // all DOFs
  SparseMatrixd mass, stiffness;            // interior DOFs (Dirichlet-eliminated)

  enum class DofType { vertex, edge_node, cell_moment };
  struct DofDescriptor {
    DofType type;
    int entity;  // vertex / edge / cell index
    Eigen::Vector2d position;  // meaningful for point-valued DOFs
    bool has_position;
  };
  std::vector<DofDescriptor> dof_info;

  int vertex_dof(int v) const { return v; }
  int edge_dof(int e, int node) const {
    return mesh->n_vertices() + e * (degree - 1) + node;
  }
  int moment_dof(int c, int m) const {
    return mesh->n_vertices() + mesh->n_edges() * (degree - 1) +
           c * (degree * (degree - 1) / 2) + m;
  }
};

std::shared_ptr<VemSpace> build_vem_space(std::shared_ptr<const PolygonalMesh> mesh, int degree);

/// DOF vector (all DOFs) of the VE interpolant of g: point DOFs by evaluation,
/// moment DOFs by quadrature against the scaled monomials.
Eigen::VectorXd interpolate(const VemSpace& space, const ScalarField& g);

/// Load vector F_i = sum_E (Pi0 f, Pi0 phi_i)_E over all DOFs.
Eigen::VectorXd project_load_full(const VemSpace& space, const ScalarField& f);

/// Interior restriction of project_load_full.
Eigen::VectorXd project_load(const VemSpace& space, const ScalarField& f);

Eigen::VectorXd restrict_interior(const VemSpace& space, const Eigen::VectorXd& full);
Eigen::VectorXd extend_zero(const VemSpace& space, const Eigen::VectorXd& interior);

/// Per-cell L2-projection coefficients of the (full) DOF vector, used for
/// point evaluation of VE functions.
Eigen::VectorXd cell_projection(const VemSpace& space, int cell, const Eigen::VectorXd& full);

/// Point value of the VE function with the given interior DOFs via the
/// per-cell L2 polynomial. cell_hint caches the containing cell.
double evaluate_field(const VemSpace& space, const Eigen::VectorXd& interior,
                      const Eigen::Vector2d& x, int* cell_hint = nullptr);

void write_dof_map_csv(const std::string& path, const VemSpace& space);

}  // namespace vemdg
