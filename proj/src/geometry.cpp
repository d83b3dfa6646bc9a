#include "vemdg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace vemdg {

namespace {

double polygon_signed_area(const std::vector<Eigen::Vector2d>& pts, const std::vector<int>& loop) {
  double a = 0.0;
  const int n = static_cast<int>(loop.size());
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& p = pts[loop[i]];
    const Eigen::Vector2d& q = pts[loop[(i + 1) % n]];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

Eigen::Vector2d polygon_centroid(const std::vector<Eigen::Vector2d>& pts,
                                 const std::vector<int>& loop, double area) {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  const int n = static_cast<int>(loop.size());
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& p = pts[loop[i]];
    const Eigen::Vector2d& q = pts[loop[(i + 1) % n]];
    const double cross = p.x() * q.y() - q.x() * p.y();
    c += cross * (p + q);
  }
  return c / (6.0 * area);
}

}  // namespace

double PolygonalMesh::max_diameter() const {
  double h = 0.0;
  for (const auto& g : geometry) h = std::max(h, g.diameter);
  return h;
}

double PolygonalMesh::total_area() const {
  double a = 0.0;
  for (const auto& g : geometry) a += g.area;
  return a;
}

PolygonalMesh finalize_mesh(const BoundingBox& box, std::vector<Eigen::Vector2d> vertices,
                            std::vector<std::vector<int>> cells, bool require_tiling) {
  PolygonalMesh mesh;
  mesh.box = box;
  mesh.vertices = std::move(vertices);
  mesh.cells = std::move(cells);

  const int n_cells = mesh.n_cells();
  mesh.cell_edges.resize(n_cells);
  mesh.geometry.resize(n_cells);

  std::map<std::pair<int, int>, int> edge_index;
  for (int c = 0; c < n_cells; ++c) {
    const auto& loop = mesh.cells[c];
    const int n = static_cast<int>(loop.size());
    if (n < 3) throw MeshError("cell " + std::to_string(c) + ": fewer than 3 vertices");

    std::set<int> seen(loop.begin(), loop.end());
    if (static_cast<int>(seen.size()) != n)
      throw MeshError("cell " + std::to_string(c) + ": duplicated vertex index in loop");
    for (int v : loop)
      if (v < 0 || v >= mesh.n_vertices())
        throw MeshError("cell " + std::to_string(c) + ": vertex index out of range");

    const double area = polygon_signed_area(mesh.vertices, loop);
    if (area <= 0.0)
      throw MeshError("cell " + std::to_string(c) +
                      ": non-positive signed area (clockwise orientation?)");

    CellGeometry& g = mesh.geometry[c];
    g.area = area;
    g.centroid = polygon_centroid(mesh.vertices, loop, area);
    g.edge_normals.resize(n);
    g.edge_lengths.resize(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j)
        g.diameter = std::max(g.diameter, (mesh.vertices[loop[i]] - mesh.vertices[loop[j]]).norm());
      const int a = loop[i];
      const int b = loop[(i + 1) % n];
      const Eigen::Vector2d d = mesh.vertices[b] - mesh.vertices[a];
      const double len = d.norm();
      if (len <= 0.0) throw MeshError("cell " + std::to_string(c) + ": zero-length edge");
      g.edge_lengths[i] = len;
      g.edge_normals[i] = Eigen::Vector2d(d.y(), -d.x()) / len;  // outward for CCW loops

      const auto key = std::minmax(a, b);
      auto it = edge_index.find(key);
      int e;
      if (it == edge_index.end()) {
        e = mesh.n_edges();
        edge_index.emplace(key, e);
        mesh.edges.push_back({key.first, key.second});
        mesh.edge_cells.push_back({-1, -1});
      } else {
        e = it->second;
      }
      // slot 0: the cell traversing the edge in canonical (v0<v1) direction
      const int slot = (a == mesh.edges[e][0]) ? 0 : 1;
      if (mesh.edge_cells[e][slot] >= 0)
        throw MeshError("edge " + std::to_string(e) + ": traversed twice in the same direction");
      mesh.edge_cells[e][slot] = c;
      mesh.cell_edges[c].push_back(e);
    }
  }

  if (require_tiling) {
    const double rel = std::abs(mesh.total_area() - box.area()) / box.area();
    if (rel > 1e-10)
      throw MeshError("cells do not tile the domain box (relative area defect " +
                      std::to_string(rel) + ")");
    const double tol = 1e-9 * box.diagonal();
    for (int e = 0; e < mesh.n_edges(); ++e) {
      if (!mesh.edge_on_boundary(e)) continue;
      for (int v : mesh.edges[e]) {
        const Eigen::Vector2d& p = mesh.vertices[v];
        const bool on_frame = std::abs(p.x() - box.x0) < tol || std::abs(p.x() - box.x1) < tol ||
                              std::abs(p.y() - box.y0) < tol || std::abs(p.y() - box.y1) < tol;
        if (!on_frame)
          throw MeshError("edge " + std::to_string(e) +
                          " has a single adjacent cell but does not lie on the boundary");
      }
    }
  }
  return mesh;
}

PolygonalMesh make_single_cell_mesh(const std::vector<Eigen::Vector2d>& polygon) {
  BoundingBox box;
  box.x0 = box.y0 = std::numeric_limits<double>::max();
  box.x1 = box.y1 = std::numeric_limits<double>::lowest();
  for (const auto& p : polygon) {
    box.x0 = std::min(box.x0, p.x());
    box.y0 = std::min(box.y0, p.y());
    box.x1 = std::max(box.x1, p.x());
    box.y1 = std::max(box.y1, p.y());
  }
  std::vector<int> loop(polygon.size());
  for (std::size_t i = 0; i < polygon.size(); ++i) loop[i] = static_cast<int>(i);
  return finalize_mesh(box, polygon, {loop}, /*require_tiling=*/false);
}

MeshQualityReport check_mesh_quality(const PolygonalMesh& mesh, double gamma, double c) {
  MeshQualityReport report;
  report.min_star_margin = std::numeric_limits<double>::max();
  report.min_vertex_separation = std::numeric_limits<double>::max();
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const auto& loop = mesh.cells[cell];
    const auto& g = mesh.geometry[cell];
    const int n = static_cast<int>(loop.size());
    // distance from the centroid to each edge line: a lower bound for the
    // radius of a ball the cell is star-shaped with respect to
    double rho = std::numeric_limits<double>::max();
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector2d& a = mesh.vertices[loop[i]];
      const double dist = (g.centroid - a).dot(g.edge_normals[i]);
      rho = std::min(rho, -dist);  // centroid is inside, so dist is negative
    }
    const double star = rho / g.diameter;
    report.min_star_margin = std::min(report.min_star_margin, star);
    if (star < gamma)
      report.warnings.push_back("cell " + std::to_string(cell) + ": star-shape margin " +
                                std::to_string(star) + " below gamma=" + std::to_string(gamma));

    double sep = std::numeric_limits<double>::max();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        sep = std::min(sep, (mesh.vertices[loop[i]] - mesh.vertices[loop[j]]).norm());
    sep /= g.diameter;
    report.min_vertex_separation = std::min(report.min_vertex_separation, sep);
    if (sep < c)
      report.warnings.push_back("cell " + std::to_string(cell) + ": vertex separation " +
                                std::to_string(sep) + " below c=" + std::to_string(c));
  }
  return report;
}

bool cell_contains(const PolygonalMesh& mesh, int cell, const Eigen::Vector2d& p) {
  const auto& loop = mesh.cells[cell];
  const int n = static_cast<int>(loop.size());
  const double tol = 1e-13 * std::max(mesh.geometry[cell].diameter, 1e-300);

  // on-boundary check first so that edge/vertex points count as inside
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& a = mesh.vertices[loop[i]];
    const Eigen::Vector2d& b = mesh.vertices[loop[(i + 1) % n]];
    const Eigen::Vector2d d = b - a;
    const double len2 = d.squaredNorm();
    const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
    if ((p - (a + t * d)).norm() <= tol) return true;
  }
  // crossing-number test
  bool inside = false;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& a = mesh.vertices[loop[i]];
    const Eigen::Vector2d& b = mesh.vertices[loop[(i + 1) % n]];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double xint = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (p.x() < xint) inside = !inside;
    }
  }
  return inside;
}

int locate_point(const PolygonalMesh& mesh, const Eigen::Vector2d& p) {
  if (!mesh.box.contains(p, 1e-13 * mesh.box.diagonal()))
    throw MeshError("locate_point: point outside the domain box");
  for (int c = 0; c < mesh.n_cells(); ++c) {
    // cheap bounding-circle prefilter
    if ((p - mesh.geometry[c].centroid).norm() > mesh.geometry[c].diameter) continue;
    if (cell_contains(mesh, c, p)) return c;
  }
  // fall back to the unfiltered scan (covers borderline prefilter misses)
  for (int c = 0; c < mesh.n_cells(); ++c)
    if (cell_contains(mesh, c, p)) return c;
  throw MeshError("locate_point: no containing cell found");
}

QuadratureRule polygon_quadrature(const PolygonalMesh& mesh, int cell, int order) {
  const auto& loop = mesh.cells[cell];
  const auto& g = mesh.geometry[cell];
  const int n = static_cast<int>(loop.size());
  QuadratureRule rule;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& a = mesh.vertices[loop[i]];
    const Eigen::Vector2d& b = mesh.vertices[loop[(i + 1) % n]];
    const double tri2 = (a - g.centroid).x() * (b - g.centroid).y() -
                        (b - g.centroid).x() * (a - g.centroid).y();
    if (tri2 <= 0.0)
      throw MeshError("polygon_quadrature: cell " + std::to_string(cell) +
                      " is not star-shaped with respect to its centroid");
    QuadratureRule tri = triangle_quadrature(g.centroid, a, b, order);
    const int base = rule.size();
    rule.nodes.insert(rule.nodes.end(), tri.nodes.begin(), tri.nodes.end());
    rule.weights.conservativeResize(base + tri.size());
    rule.weights.tail(tri.size()) = tri.weights;
  }
  return rule;
}

QuadratureRule edge_gauss_lobatto(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1, int k) {
  if (k < 1) throw std::invalid_argument("edge_gauss_lobatto: need k >= 1");
  const Rule1d gl = gauss_lobatto(k + 1);
  QuadratureRule rule;
  rule.weights.resize(k + 1);
  const double half_len = 0.5 * (p1 - p0).norm();
  for (int i = 0; i <= k; ++i) {
    const double s = 0.5 * (gl.nodes[i] + 1.0);
    rule.nodes.push_back(p0 + s * (p1 - p0));
    rule.weights[i] = gl.weights[i] * half_len;
  }
  return rule;
}

}  // namespace vemdg
