#pragma once

#include <string>

#include "vemdg/config.hpp"

namespace vemdg {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitSolverFailure = 3;
inline constexpr int kExitWindowMiss = 4;

struct MeshGenOptions {
  std::string type = "voronoi";  // grid | voronoi
  int nx = 4, ny = 4;
  int n = 100;
  std::uint64_t seed = 42;
  int lloyd_iters = 50;
  BoundingBox box{0, 0, 1, 1};
  std::string out = "mesh.json";
};
int cmd_mesh_gen(const MeshGenOptions& options);

int cmd_solve(const RunConfig& config);

struct VerifyOptions {
  std::string output_dir = "out_verify";
  bool time_study = true;
  bool space_study = true;
  bool combined_study = true;
  bool paper_exact = false;  // r=6, dt=0.1 in the space study
  bool quick = false;        // reduced smoke-test studies, windows not gated
  int max_levels = 0;        // truncate every study to this many levels (0 = all)
  std::string solver = "auto";
};
int cmd_verify(const VerifyOptions& options);

struct ValidateOptions {
  std::string output_dir = "out_validate";
  bool reduced = true;  // 800-cell reference with dt=1/160 (full: 3200, 1/320)
  bool self_check = false;
  std::string solver = "auto";
};
int cmd_validate(const ValidateOptions& options);

}  // namespace vemdg
