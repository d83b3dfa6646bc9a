#include "vemdg/mesh_gen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

namespace vemdg {

PolygonalMesh generate_structured(int nx, int ny, const BoundingBox& box) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("generate_structured: counts must be >= 1");
  std::vector<Eigen::Vector2d> vertices;
  vertices.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      vertices.emplace_back(box.x0 + box.width() * i / nx, box.y0 + box.height() * j / ny);

  std::vector<std::vector<int>> cells;
  cells.reserve(nx * ny);
  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
  return finalize_mesh(box, std::move(vertices), std::move(cells));
}

namespace {

// Explicit mapping from raw 64-bit draws to doubles keeps the stream
// independent of the standard library's distribution implementation.
struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform() { return (gen() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
};

using Polygon = std::vector<Eigen::Vector2d>;

// Sutherland-Hodgman clip of a convex CCW polygon by the half-plane
// { x : (x - point) . normal <= 0 }.
Polygon clip_halfplane(const Polygon& poly, const Eigen::Vector2d& point,
                       const Eigen::Vector2d& normal) {
  Polygon out;
  const int n = static_cast<int>(poly.size());
  if (n == 0) return out;
  out.reserve(n + 1);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& a = poly[i];
    const Eigen::Vector2d& b = poly[(i + 1) % n];
    const double da = (a - point).dot(normal);
    const double db = (b - point).dot(normal);
    if (da <= 0.0) {
      out.push_back(a);
      if (db > 0.0) out.push_back(a + (b - a) * (da / (da - db)));
    } else if (db <= 0.0) {
      out.push_back(a + (b - a) * (da / (da - db)));
    }
  }
  return out;
}

double max_vertex_distance(const Polygon& poly, const Eigen::Vector2d& from) {
  double d = 0.0;
  for (const auto& p : poly) d = std::max(d, (p - from).norm());
  return d;
}

Eigen::Vector2d centroid_of(const Polygon& poly) {
  double area = 0.0;
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  const int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& p = poly[i];
    const Eigen::Vector2d& q = poly[(i + 1) % n];
    const double cross = p.x() * q.y() - q.x() * p.y();
    area += cross;
    c += cross * (p + q);
  }
  return c / (3.0 * area);
}

// Uniform-grid index over the mirrored point cloud for neighbor queries.
struct PointGrid {
  double x0, y0, bin;
  int nx, ny;
  std::vector<std::vector<int>> bins;

  PointGrid(const std::vector<Eigen::Vector2d>& pts, const BoundingBox& box, int n_seeds) {
    const double span_x = 3.0 * box.width();
    const double span_y = 3.0 * box.height();
    x0 = box.x0 - box.width();
    y0 = box.y0 - box.height();
    const int target = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n_seeds))));
    nx = 3 * target;
    ny = 3 * target;
    bin = std::max(span_x / nx, span_y / ny);
    nx = static_cast<int>(std::ceil(span_x / bin));
    ny = static_cast<int>(std::ceil(span_y / bin));
    bins.resize(static_cast<std::size_t>(nx) * ny);
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
      const int bx = std::clamp(static_cast<int>((pts[i].x() - x0) / bin), 0, nx - 1);
      const int by = std::clamp(static_cast<int>((pts[i].y() - y0) / bin), 0, ny - 1);
      bins[static_cast<std::size_t>(by) * nx + bx].push_back(i);
    }
  }

  void collect_within(const Eigen::Vector2d& p, double radius, std::vector<int>* out) const {
    out->clear();
    const int bx0 = std::clamp(static_cast<int>((p.x() - radius - x0) / bin), 0, nx - 1);
    const int bx1 = std::clamp(static_cast<int>((p.x() + radius - x0) / bin), 0, nx - 1);
    const int by0 = std::clamp(static_cast<int>((p.y() - radius - y0) / bin), 0, ny - 1);
    const int by1 = std::clamp(static_cast<int>((p.y() + radius - y0) / bin), 0, ny - 1);
    for (int by = by0; by <= by1; ++by)
      for (int bx = bx0; bx <= bx1; ++bx)
        for (int id : bins[static_cast<std::size_t>(by) * nx + bx]) out->push_back(id);
  }
};

// Voronoi cell of seed i, clipped to the box, by sequential bisector clipping
// against neighbors sorted by distance. The 5n mirrored cloud makes the box
// sides appear as ordinary bisectors.
Polygon voronoi_cell(int i, const std::vector<Eigen::Vector2d>& cloud, const PointGrid& grid,
                     const BoundingBox& box) {
  const Eigen::Vector2d s = cloud[i];
  Polygon poly = {{box.x0, box.y0}, {box.x1, box.y0}, {box.x1, box.y1}, {box.x0, box.y1}};
  double radius = 4.0 * grid.bin;
  std::vector<int> cand;
  for (int attempt = 0; attempt < 40; ++attempt) {
    grid.collect_within(s, radius, &cand);
    std::sort(cand.begin(), cand.end(), [&](int a, int b) {
      const double da = (cloud[a] - s).squaredNorm();
      const double db = (cloud[b] - s).squaredNorm();
      return da != db ? da < db : a < b;
    });
    Polygon current = poly;
    for (int j : cand) {
      if (j == i) continue;
      const Eigen::Vector2d q = cloud[j];
      const double dist = (q - s).norm();
      if (dist > 2.0 * max_vertex_distance(current, s)) break;
      current = clip_halfplane(current, 0.5 * (s + q), q - s);
      if (current.empty()) break;
    }
    if (2.0 * max_vertex_distance(current, s) <= radius) return current;
    radius *= 2.0;
  }
  throw MeshError("voronoi_cell: neighbor search failed to close");
}

std::vector<Eigen::Vector2d> mirrored_cloud(const std::vector<Eigen::Vector2d>& seeds,
                                            const BoundingBox& box) {
  std::vector<Eigen::Vector2d> cloud = seeds;
  cloud.reserve(5 * seeds.size());
  for (const auto& p : seeds) cloud.emplace_back(2.0 * box.x0 - p.x(), p.y());
  for (const auto& p : seeds) cloud.emplace_back(2.0 * box.x1 - p.x(), p.y());
  for (const auto& p : seeds) cloud.emplace_back(p.x(), 2.0 * box.y0 - p.y());
  for (const auto& p : seeds) cloud.emplace_back(p.x(), 2.0 * box.y1 - p.y());
  return cloud;
}

PolygonalMesh mesh_from_cells(const std::vector<Polygon>& polys, const BoundingBox& box) {
  // Weld vertices shared between neighboring clipped cells: collect, bucket by
  // a coarse grid keyed at the weld tolerance, and merge within-tolerance hits.
  const double tol = 1e-9 * box.diagonal();
  std::vector<Eigen::Vector2d> verts;
  std::vector<std::vector<int>> loops(polys.size());

  struct Key {
    long long x, y;
    bool operator<(const Key& o) const { return x != o.x ? x < o.x : y < o.y; }
  };
  std::map<Key, std::vector<int>> buckets;
  const auto key_of = [&](const Eigen::Vector2d& p, int dx, int dy) {
    return Key{static_cast<long long>(std::floor(p.x() / (2.0 * tol))) + dx,
               static_cast<long long>(std::floor(p.y() / (2.0 * tol))) + dy};
  };

  for (std::size_t c = 0; c < polys.size(); ++c) {
    for (const auto& p : polys[c]) {
      int found = -1;
      for (int dx = -1; dx <= 1 && found < 0; ++dx)
        for (int dy = -1; dy <= 1 && found < 0; ++dy) {
          auto it = buckets.find(key_of(p, dx, dy));
          if (it == buckets.end()) continue;
          for (int v : it->second)
            if ((verts[v] - p).norm() <= tol) {
              found = v;
              break;
            }
        }
      if (found < 0) {
        found = static_cast<int>(verts.size());
        verts.push_back(p);
        buckets[key_of(p, 0, 0)].push_back(found);
      }
      loops[c].push_back(found);
    }
    // drop repeats produced by the weld (collapsed sliver edges)
    auto& loop = loops[c];
    std::vector<int> cleaned;
    for (std::size_t i = 0; i < loop.size(); ++i)
      if (loop[i] != loop[(i + 1) % loop.size()]) cleaned.push_back(loop[i]);
    loop = std::move(cleaned);
  }
  return finalize_mesh(box, std::move(verts), std::move(loops));
}

}  // namespace

PolygonalMesh generate_voronoi_lloyd(int n_cells, const BoundingBox& box, std::uint64_t seed,
                                     int lloyd_iters) {
  if (n_cells < 1) throw std::invalid_argument("generate_voronoi_lloyd: need n_cells >= 1");
  if (n_cells == 1) {
    std::vector<Eigen::Vector2d> v = {{box.x0, box.y0}, {box.x1, box.y0},
                                      {box.x1, box.y1}, {box.x0, box.y1}};
    return finalize_mesh(box, v, {{0, 1, 2, 3}});
  }

  for (std::uint64_t attempt = 0; attempt < 5; ++attempt) {
    Rng rng(seed + attempt * 0x9e3779b97f4a7c15ULL);
    std::vector<Eigen::Vector2d> seeds(n_cells);
    for (auto& s : seeds)
      s = Eigen::Vector2d(rng.uniform(box.x0, box.x1), rng.uniform(box.y0, box.y1));

    // resolve coincident seeds by deterministic jitter
    const double min_sep = 1e-10 * box.diagonal();
    for (int i = 0; i < n_cells; ++i)
      for (int j = 0; j < i; ++j)
        while ((seeds[i] - seeds[j]).norm() < min_sep) {
          seeds[i] += Eigen::Vector2d(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)) *
                      (1e-6 * box.diagonal());
          seeds[i].x() = std::clamp(seeds[i].x(), box.x0, box.x1);
          seeds[i].y() = std::clamp(seeds[i].y(), box.y0, box.y1);
        }

    std::vector<Polygon> polys(n_cells);
    const double move_tol = 1e-10 * box.diagonal();
    for (int iter = 0; iter <= lloyd_iters; ++iter) {
      const auto cloud = mirrored_cloud(seeds, box);
      const PointGrid grid(cloud, box, n_cells);
      double max_move = 0.0;
      for (int i = 0; i < n_cells; ++i) {
        polys[i] = voronoi_cell(i, cloud, grid, box);
        if (polys[i].size() < 3) throw MeshError("generate_voronoi_lloyd: empty cell");
        if (iter < lloyd_iters) {
          const Eigen::Vector2d c = centroid_of(polys[i]);
          max_move = std::max(max_move, (c - seeds[i]).norm());
          seeds[i] = c;
        }
      }
      if (iter < lloyd_iters && max_move < move_tol) {
        // converged; rebuild cells once from the final seeds
        const auto final_cloud = mirrored_cloud(seeds, box);
        const PointGrid final_grid(final_cloud, box, n_cells);
        for (int i = 0; i < n_cells; ++i) polys[i] = voronoi_cell(i, final_cloud, final_grid, box);
        break;
      }
    }

    try {
      return mesh_from_cells(polys, box);
    } catch (const MeshError&) {
      // re-jitter deterministically and retry (near-degenerate junction)
      continue;
    }
  }
  throw MeshError("generate_voronoi_lloyd: failed to produce a conforming mesh");
}

}  // namespace vemdg
