#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "vemdg/quadrature.hpp"

namespace vemdg {

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BoundingBox {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  double diagonal() const { return std::hypot(width(), height()); }
  bool contains(const Eigen::Vector2d& p, double tol = 0.0) const {
    return p.x() >= x0 - tol && p.x() <= x1 + tol && p.y() >= y0 - tol && p.y() <= y1 + tol;
  }
};

struct CellGeometry {
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  double diameter = 0.0;  // h_E
  double area = 0.0;      // |E|
  std::vector<Eigen::Vector2d> edge_normals;  // outward unit normals, loop order
  std::vector<double> edge_lengths;
};

struct PolygonalMesh {
  BoundingBox box;
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 2>> edges;       // canonical orientation: v0 < v1
  std::vector<std::vector<int>> cells;         // CCW vertex loops
  std::vector<std::vector<int>> cell_edges;    // edge index per loop segment
  std::vector<std::array<int, 2>> edge_cells;  // adjacent cells, -1 = none
  std::vector<CellGeometry> geometry;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }

  bool edge_on_boundary(int e) const { return edge_cells[e][0] < 0 || edge_cells[e][1] < 0; }

  /// Mesh size h = max cell diameter.
  double max_diameter() const;
  double total_area() const;
};

/// Builds edge/adjacency/geometry tables from raw CCW loops. Throws MeshError
/// (naming the offending cell) on inverted orientation, repeated vertices in a
/// loop, or degenerate cells. With require_tiling, the cell areas must sum to
/// the box area (1e-10 relative) and boundary edges must lie on the box frame.
PolygonalMesh finalize_mesh(const BoundingBox& box, std::vector<Eigen::Vector2d> vertices,
                            std::vector<std::vector<int>> cells, bool require_tiling = true);

/// One free-standing polygon as a mesh (box = bounding box; no tiling check).
PolygonalMesh make_single_cell_mesh(const std::vector<Eigen::Vector2d>& polygon);

struct MeshQualityReport {
  double min_star_margin = 0.0;        // min over cells of rho_E / h_E (rho_E from the fan)
  double min_vertex_separation = 0.0;  // min over cells of min vertex distance / h_E
  std::vector<std::string> warnings;
  bool clean() const { return warnings.empty(); }
};

/// Validates the star-shapedness and vertex-separation assumptions; threshold
/// violations produce warnings, not errors (the regularity constants are not
/// prescribed, so they stay configurable).
MeshQualityReport check_mesh_quality(const PolygonalMesh& mesh, double gamma = 0.1,
                                     double c = 0.05);

/// True if p lies in the (closed) cell.
bool cell_contains(const PolygonalMesh& mesh, int cell, const Eigen::Vector2d& p);

/// Index of a cell containing p; boundary ties resolved to the lowest index.
/// Throws MeshError if p is outside the domain box.
int locate_point(const PolygonalMesh& mesh, const Eigen::Vector2d& p);

/// Quadrature over one cell, exact for total degree <= order. Built by fanning
/// the polygon from its centroid; throws MeshError if the fan degenerates
/// (cell not star-shaped with respect to its centroid).
QuadratureRule polygon_quadrature(const PolygonalMesh& mesh, int cell, int order);

/// k+1 Gauss-Lobatto points on the segment p0-p1 (both endpoints included);
/// weights integrate degree 2k-1 exactly on the segment.
QuadratureRule edge_gauss_lobatto(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1, int k);

}  // namespace vemdg
