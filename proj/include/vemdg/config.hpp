#pragma once

#include <cstdint>
#include <string>

#include "vemdg/geometry.hpp"
#include "vemdg/slab_system.hpp"

namespace vemdg {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MeshSpec {
  std::string type = "voronoi";  // grid | voronoi | file
  int nx = 4, ny = 4;            // grid
  int n = 100;                   // voronoi cell count
  std::uint64_t seed = 42;
  int lloyd_iters = 50;
  std::string path;  // file
  BoundingBox box{0, 0, 1, 1};
};

struct TimeSpec {
  double T = 1.0;
  int slabs = 20;
  int r = 2;
};

/// One-shot run configuration (the `solve` subcommand). Stored as JSON; CLI
/// flags override file values and the effective configuration is echoed into
/// the output directory.
struct RunConfig {
  MeshSpec mesh;
  int degree = 2;
  TimeSpec time;
  double nu = 1.0;
  std::string problem = "manufactured";  // manufactured | impulse | zero
  Eigen::Vector2d receiver = Eigen::Vector2d(0.5, 0.5);
  std::string solver = "auto";  // auto | dense | sparse | kron
  std::string output_dir = "out";
  bool dump_matrices = false;
  bool triple_norm = false;  // also report the full-history interpolant error

  void validate() const;
};

RunConfig load_run_config(const std::string& path);
void save_run_config(const RunConfig& config, const std::string& path);

SlabSolverKind parse_solver_kind(const std::string& name);
PolygonalMesh build_mesh(const MeshSpec& spec);

}  // namespace vemdg
