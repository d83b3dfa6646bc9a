#include "vemdg/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

#include "vemdg/mesh_gen.hpp"
#include "vemdg/mesh_io.hpp"

namespace vemdg {

using nlohmann::json;

void RunConfig::validate() const {
  if (degree < 1) throw ConfigError("config: degree must be >= 1");
  if (time.r < 1) throw ConfigError("config: time degree r must be >= 1");
  if (time.T <= 0.0) throw ConfigError("config: T must be positive");
  if (time.slabs < 1) throw ConfigError("config: slabs must be >= 1");
  if (nu < 0.0) throw ConfigError("config: nu must be nonnegative");
  if (problem != "manufactured" && problem != "impulse" && problem != "zero")
    throw ConfigError("config: unknown problem '" + problem + "'");
  if (mesh.type != "grid" && mesh.type != "voronoi" && mesh.type != "file")
    throw ConfigError("config: unknown mesh type '" + mesh.type + "'");
  if (mesh.type == "file" && mesh.path.empty())
    throw ConfigError("config: mesh type 'file' needs mesh.path");
  if (output_dir.empty()) throw ConfigError("config: output_dir must not be empty");
  parse_solver_kind(solver);
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  RunConfig c;
  try {
    if (j.contains("mesh")) {
      const auto& m = j["mesh"];
      c.mesh.type = m.value("type", c.mesh.type);
      c.mesh.nx = m.value("nx", c.mesh.nx);
      c.mesh.ny = m.value("ny", c.mesh.ny);
      c.mesh.n = m.value("n", c.mesh.n);
      c.mesh.seed = m.value("seed", c.mesh.seed);
      c.mesh.lloyd_iters = m.value("lloyd_iters", c.mesh.lloyd_iters);
      c.mesh.path = m.value("path", c.mesh.path);
      if (m.contains("box")) {
        const auto& b = m["box"];
        c.mesh.box = BoundingBox{b.at(0), b.at(1), b.at(2), b.at(3)};
      }
    }
    c.degree = j.value("degree", c.degree);
    if (j.contains("time")) {
      const auto& t = j["time"];
      c.time.T = t.value("T", c.time.T);
      c.time.slabs = t.value("slabs", c.time.slabs);
      c.time.r = t.value("r", c.time.r);
    }
    c.nu = j.value("nu", c.nu);
    c.problem = j.value("problem", c.problem);
    if (j.contains("receiver")) {
      const auto& r = j["receiver"];
      c.receiver = Eigen::Vector2d(r.at(0), r.at(1));
    }
    c.solver = j.value("solver", c.solver);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.dump_matrices = j.value("dump_matrices", c.dump_matrices);
    c.triple_norm = j.value("triple_norm", c.triple_norm);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: schema error: ") + e.what());
  }
  c.validate();
  return c;
}

void save_run_config(const RunConfig& c, const std::string& path) {
  json j;
  j["mesh"] = {{"type", c.mesh.type}, {"nx", c.mesh.nx},   {"ny", c.mesh.ny},
               {"n", c.mesh.n},       {"seed", c.mesh.seed}, {"lloyd_iters", c.mesh.lloyd_iters},
               {"path", c.mesh.path},
               {"box", {c.mesh.box.x0, c.mesh.box.y0, c.mesh.box.x1, c.mesh.box.y1}}};
  j["degree"] = c.degree;
  j["time"] = {{"T", c.time.T}, {"slabs", c.time.slabs}, {"r", c.time.r}};
  j["nu"] = c.nu;
  j["problem"] = c.problem;
  j["receiver"] = {c.receiver.x(), c.receiver.y()};
  j["solver"] = c.solver;
  j["output_dir"] = c.output_dir;
  j["dump_matrices"] = c.dump_matrices;
  j["triple_norm"] = c.triple_norm;
  std::ofstream out(path);
  if (!out) throw ConfigError("config: cannot write " + path);
  out << j.dump(2) << "\n";
}

SlabSolverKind parse_solver_kind(const std::string& name) {
  if (name == "auto") return SlabSolverKind::automatic;
  if (name == "dense") return SlabSolverKind::dense;
  if (name == "sparse") return SlabSolverKind::sparse_lu;
  if (name == "kron") return SlabSolverKind::kron_diag;
  throw ConfigError("config: unknown solver '" + name + "'");
}

PolygonalMesh build_mesh(const MeshSpec& spec) {
  if (spec.type == "grid") return generate_structured(spec.nx, spec.ny, spec.box);
  if (spec.type == "voronoi")
    return generate_voronoi_lloyd(spec.n, spec.box, spec.seed, spec.lloyd_iters);
  return read_mesh(spec.path);
}

}  // namespace vemdg
