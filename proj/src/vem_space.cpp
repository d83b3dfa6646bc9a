#include "vemdg/vem_space.hpp"

#include <Eigen/SparseCholesky>

#include <cstdio>
#include <fstream>

namespace vemdg {

std::shared_ptr<VemSpace> build_vem_space(std::shared_ptr<const PolygonalMesh> mesh, int degree) {
  if (degree < 1) throw VemError("build_vem_space: degree must be >= 1");
  auto space = std::make_shared<VemSpace>();
  space->mesh = mesh;
  space->degree = degree;
  const int k = degree;
  const int n_moments = k * (k - 1) / 2;
  space->n_total = mesh->n_vertices() + (k - 1) * mesh->n_edges() + n_moments * mesh->n_cells();

  // DOF metadata
  space->dof_info.resize(space->n_total);
  for (int v = 0; v < mesh->n_vertices(); ++v)
    space->dof_info[v] = {VemSpace::DofType::vertex, v, mesh->vertices[v], true};
  for (int e = 0; e < mesh->n_edges(); ++e) {
    const Eigen::Vector2d a = mesh->vertices[mesh->edges[e][0]];
    const Eigen::Vector2d b = mesh->vertices[mesh->edges[e][1]];
    if (k >= 2) {
      const QuadratureRule rule = edge_gauss_lobatto(a, b, k);
      for (int j = 1; j < k; ++j)
        space->dof_info[space->edge_dof(e, j - 1)] = {VemSpace::DofType::edge_node, e,
                                                      rule.nodes[j], true};
    }
  }
  for (int c = 0; c < mesh->n_cells(); ++c)
    for (int m = 0; m < n_moments; ++m)
      space->dof_info[space->moment_dof(c, m)] = {VemSpace::DofType::cell_moment, c,
                                                  Eigen::Vector2d::Zero(), false};

  // local -> global map; edge interior nodes are stored in the canonical
  // (low vertex -> high vertex) direction and reversed when the cell loop
  // traverses the edge the other way
  space->cell_dofs.resize(mesh->n_cells());
  for (int c = 0; c < mesh->n_cells(); ++c) {
    const auto& loop = mesh->cells[c];
    const int n = static_cast<int>(loop.size());
    auto& map = space->cell_dofs[c];
    map.reserve(LocalVemElement::local_dof_count(n, k));
    for (int i = 0; i < n; ++i) map.push_back(space->vertex_dof(loop[i]));
    for (int i = 0; i < n; ++i) {
      const int a = loop[i];
      const int b = loop[(i + 1) % n];
      const int e = mesh->cell_edges[c][i];
      const bool canonical = (a < b);
      for (int j = 0; j < k - 1; ++j)
        map.push_back(space->edge_dof(e, canonical ? j : k - 2 - j));
    }
    for (int m = 0; m < n_moments; ++m) map.push_back(space->moment_dof(c, m));
  }

  // boundary DOFs: endpoints and interior nodes of boundary edges
  space->dof_on_boundary.assign(space->n_total, 0);
  for (int e = 0; e < mesh->n_edges(); ++e) {
    if (!mesh->edge_on_boundary(e)) continue;
    space->dof_on_boundary[space->vertex_dof(mesh->edges[e][0])] = 1;
    space->dof_on_boundary[space->vertex_dof(mesh->edges[e][1])] = 1;
    for (int j = 0; j < k - 1; ++j) space->dof_on_boundary[space->edge_dof(e, j)] = 1;
  }
  space->interior_of_global.assign(space->n_total, -1);
  for (int g = 0; g < space->n_total; ++g)
    if (!space->dof_on_boundary[g]) {
      space->interior_of_global[g] = static_cast<int>(space->global_of_interior.size());
      space->global_of_interior.push_back(g);
    }
  space->n_interior = static_cast<int>(space->global_of_interior.size());

  // local elements and global assembly
  space->elements.reserve(mesh->n_cells());
  std::vector<Tripletd> mass_trips, stiff_trips;
  for (int c = 0; c < mesh->n_cells(); ++c) {
    space->elements.push_back(build_local_element(*mesh, c, k));
    const auto& el = space->elements.back();
    const auto& map = space->cell_dofs[c];
    for (int i = 0; i < el.n_dofs; ++i)
      for (int j = 0; j < el.n_dofs; ++j) {
        mass_trips.emplace_back(map[i], map[j], el.mass(i, j));
        stiff_trips.emplace_back(map[i], map[j], el.stiffness(i, j));
      }
  }
  space->mass_full = assemble_sparse_symmetric(space->n_total, mass_trips);
  space->stiffness_full = assemble_sparse_symmetric(space->n_total, stiff_trips);

  // Dirichlet elimination: keep interior rows/columns
  std::vector<Tripletd> mass_int, stiff_int;
  const auto keep = [&](const SparseMatrixd& m, std::vector<Tripletd>* out) {
    for (int col = 0; col < m.outerSize(); ++col) {
      const int jc = space->interior_of_global[col];
      if (jc < 0) continue;
      for (SparseMatrixd::InnerIterator it(m, col); it; ++it) {
        const int ir = space->interior_of_global[it.row()];
        if (ir >= 0) out->emplace_back(ir, jc, it.value());
      }
    }
  };
  keep(space->mass_full, &mass_int);
  keep(space->stiffness_full, &stiff_int);
  space->mass = assemble_sparse_symmetric(space->n_interior, mass_int);
  space->stiffness = assemble_sparse_symmetric(space->n_interior, stiff_int);

  // SPD verification via sparse Cholesky
  {
    Eigen::SimplicialLLT<SparseMatrixd> llt(space->mass_full);
    if (llt.info() != Eigen::Success)
      throw VemError("build_vem_space: global mass matrix is not SPD");
    if (space->n_interior > 0) {
      llt.compute(space->mass);
      if (llt.info() != Eigen::Success)
        throw VemError("build_vem_space: interior mass matrix is not SPD");
      llt.compute(space->stiffness);
      if (llt.info() != Eigen::Success)
        throw VemError("build_vem_space: interior stiffness matrix is not SPD");
    }
  }
  return space;
}

Eigen::VectorXd interpolate(const VemSpace& space, const ScalarField& g) {
  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(space.n_total);
  for (int d = 0; d < space.n_total; ++d)
    if (space.dof_info[d].has_position) dofs[d] = g(space.dof_info[d].position);
  const int nm = space.degree * (space.degree - 1) / 2;
  for (int c = 0; c < space.mesh->n_cells(); ++c) {
    if (nm == 0) break;
    const auto& el = space.elements[c];
    Eigen::VectorXd moments = Eigen::VectorXd::Zero(nm);
    for (int q = 0; q < el.quadrature.size(); ++q) {
      const Eigen::VectorXd vals = el.basis.values(el.quadrature.nodes[q]);
      moments += el.quadrature.weights[q] * g(el.quadrature.nodes[q]) * vals.head(nm);
    }
    for (int m = 0; m < nm; ++m) dofs[space.moment_dof(c, m)] = moments[m] / el.area_;
  }
  return dofs;
}

Eigen::VectorXd project_load_full(const VemSpace& space, const ScalarField& f) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(space.n_total);
  for (int c = 0; c < space.mesh->n_cells(); ++c) {
    const auto& el = space.elements[c];
    Eigen::VectorXd b = Eigen::VectorXd::Zero(el.basis.size());
    for (int q = 0; q < el.quadrature.size(); ++q)
      b += el.quadrature.weights[q] * f(el.quadrature.nodes[q]) *
           el.basis.values(el.quadrature.nodes[q]);
    const Eigen::VectorXd local = el.pi_zero.transpose() * b;
    const auto& map = space.cell_dofs[c];
    for (int i = 0; i < el.n_dofs; ++i) load[map[i]] += local[i];
  }
  return load;
}

Eigen::VectorXd project_load(const VemSpace& space, const ScalarField& f) {
  return restrict_interior(space, project_load_full(space, f));
}

Eigen::VectorXd restrict_interior(const VemSpace& space, const Eigen::VectorXd& full) {
  Eigen::VectorXd out(space.n_interior);
  for (int i = 0; i < space.n_interior; ++i) out[i] = full[space.global_of_interior[i]];
  return out;
}

Eigen::VectorXd extend_zero(const VemSpace& space, const Eigen::VectorXd& interior) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.n_total);
  for (int i = 0; i < space.n_interior; ++i) out[space.global_of_interior[i]] = interior[i];
  return out;
}

Eigen::VectorXd cell_projection(const VemSpace& space, int cell, const Eigen::VectorXd& full) {
  const auto& el = space.elements[cell];
  const auto& map = space.cell_dofs[cell];
  Eigen::VectorXd local(el.n_dofs);
  for (int i = 0; i < el.n_dofs; ++i) local[i] = full[map[i]];
  return el.pi_zero * local;
}

double evaluate_field(const VemSpace& space, const Eigen::VectorXd& interior,
                      const Eigen::Vector2d& x, int* cell_hint) {
  int cell = -1;
  if (cell_hint && *cell_hint >= 0 && cell_contains(*space.mesh, *cell_hint, x))
    cell = *cell_hint;
  else
    cell = locate_point(*space.mesh, x);
  if (cell_hint) *cell_hint = cell;
  const Eigen::VectorXd poly = cell_projection(space, cell, extend_zero(space, interior));
  return poly.dot(space.elements[cell].basis.values(x));
}

void write_dof_map_csv(const std::string& path, const VemSpace& space) {
  std::ofstream out(path);
  if (!out) throw VemError("write_dof_map_csv: cannot open " + path);
  out << "dof,type,entity,x,y,boundary\n";
  char buf[128];
  for (int d = 0; d < space.n_total; ++d) {
    const auto& info = space.dof_info[d];
    const char* type = info.type == VemSpace::DofType::vertex ? "vertex"
                       : info.type == VemSpace::DofType::edge_node ? "edge_node"
                                                                   : "cell_moment";
    if (info.has_position)
      std::snprintf(buf, sizeof(buf), "%d,%s,%d,%.17g,%.17g,%d\n", d, type, info.entity,
                    info.position.x(), info.position.y(), static_cast<int>(space.dof_on_boundary[d]));
    else
      std::snprintf(buf, sizeof(buf), "%d,%s,%d,,,%d\n", d, type, info.entity,
                    static_cast<int>(space.dof_on_boundary[d]));
    out << buf;
  }
}

}  // namespace vemdg
