#include "vemdg/mesh_io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>

namespace vemdg {

namespace {
using nlohmann::json;

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

PolygonalMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("read_mesh: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw MeshError(std::string("read_mesh: invalid JSON: ") + e.what());
  }

  if (!j.is_object() || !j.contains("box") || !j.contains("vertices") || !j.contains("cells"))
    throw MeshError("read_mesh: schema violation: expected keys box, vertices, cells");
  const auto& jb = j["box"];
  if (!jb.is_array() || jb.size() != 4 || !jb[0].is_number())
    throw MeshError("read_mesh: schema violation: box must be [x0,y0,x1,y1]");
  BoundingBox box{jb[0].get<double>(), jb[1].get<double>(), jb[2].get<double>(),
                  jb[3].get<double>()};
  if (box.width() <= 0 || box.height() <= 0)
    throw MeshError("read_mesh: schema violation: empty box");

  std::vector<Eigen::Vector2d> vertices;
  for (const auto& jv : j["vertices"]) {
    if (!jv.is_array() || jv.size() != 2 || !jv[0].is_number() || !jv[1].is_number())
      throw MeshError("read_mesh: schema violation: vertex must be [x,y]");
    vertices.emplace_back(jv[0].get<double>(), jv[1].get<double>());
  }

  std::vector<std::vector<int>> cells;
  for (const auto& jc : j["cells"]) {
    if (!jc.is_array() || jc.size() < 3)
      throw MeshError("read_mesh: schema violation: cell " + std::to_string(cells.size()) +
                      " must be a list of >= 3 vertex indices");
    std::vector<int> loop;
    for (const auto& ji : jc) {
      if (!ji.is_number_integer())
        throw MeshError("read_mesh: schema violation: cell " + std::to_string(cells.size()) +
                        " has a non-integer vertex index");
      loop.push_back(ji.get<int>());
    }
    cells.push_back(std::move(loop));
  }
  return finalize_mesh(box, std::move(vertices), std::move(cells));
}

void write_mesh(const PolygonalMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("write_mesh: cannot open " + path);
  out << "{\n  \"box\": [" << fmt17(mesh.box.x0) << ", " << fmt17(mesh.box.y0) << ", "
      << fmt17(mesh.box.x1) << ", " << fmt17(mesh.box.y1) << "],\n";
  out << "  \"vertices\": [\n";
  for (int v = 0; v < mesh.n_vertices(); ++v)
    out << "    [" << fmt17(mesh.vertices[v].x()) << ", " << fmt17(mesh.vertices[v].y()) << "]"
        << (v + 1 < mesh.n_vertices() ? "," : "") << "\n";
  out << "  ],\n  \"cells\": [\n";
  for (int c = 0; c < mesh.n_cells(); ++c) {
    out << "    [";
    for (std::size_t i = 0; i < mesh.cells[c].size(); ++i)
      out << mesh.cells[c][i] << (i + 1 < mesh.cells[c].size() ? ", " : "");
    out << "]" << (c + 1 < mesh.n_cells() ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
}

}  // namespace vemdg
