#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "vemdg/cli.hpp"
#include "vemdg/mesh_io.hpp"

using namespace vemdg;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig small_config(const std::string& out, const std::string& problem) {
  RunConfig config;
  config.mesh.type = "grid";
  config.mesh.nx = 3;
  config.mesh.ny = 3;
  config.degree = 2;
  config.time.T = 1.0;
  config.time.slabs = 4;
  config.time.r = 2;
  config.nu = 1.0;
  config.problem = problem;
  config.output_dir = out;
  return config;
}
}  // namespace

TEST_CASE("cmd_solve: zero problem writes all-zero CSV columns") {
  const fs::path dir = fresh_dir("vemdg_cli_zero");
  RunConfig config = small_config(dir.string(), "zero");
  REQUIRE(cmd_solve(config) == kExitOk);
  std::ifstream in(dir / "receiver.csv");
  std::string line;
  std::getline(in, line);  // header
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(line.substr(line.find(',') + 1) == "0");
    ++rows;
  }
  CHECK(rows == 5);
  const std::string energy = slurp(dir / "energy.csv");
  CHECK(energy.find("\n0,0,0,0,0,0,0,0,0") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("cmd_solve: determinism, identical bytes across reruns") {
  const fs::path dir_a = fresh_dir("vemdg_cli_det_a");
  const fs::path dir_b = fresh_dir("vemdg_cli_det_b");
  RunConfig config = small_config(dir_a.string(), "manufactured");
  config.mesh.type = "voronoi";
  config.mesh.n = 24;
  config.mesh.seed = 9;
  REQUIRE(cmd_solve(config) == kExitOk);
  config.output_dir = dir_b.string();
  REQUIRE(cmd_solve(config) == kExitOk);
  for (const char* name : {"receiver.csv", "energy.csv", "snapshots.csv", "errors.csv"})
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("cmd_solve: config echo round trip reproduces the outputs") {
  const fs::path dir_a = fresh_dir("vemdg_cli_echo_a");
  const fs::path dir_b = fresh_dir("vemdg_cli_echo_b");
  RunConfig config = small_config(dir_a.string(), "manufactured");
  REQUIRE(cmd_solve(config) == kExitOk);

  RunConfig echoed = load_run_config((dir_a / "config_echo.json").string());
  echoed.output_dir = dir_b.string();
  REQUIRE(cmd_solve(echoed) == kExitOk);
  for (const char* name : {"receiver.csv", "energy.csv", "errors.csv"})
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("cmd_solve: impulse causality, quiet before the onset") {
  const fs::path dir = fresh_dir("vemdg_cli_impulse");
  RunConfig config = small_config(dir.string(), "impulse");
  config.nu = 0.0;
  config.time.slabs = 20;  // slab ends hit t = 0.1 exactly
  REQUIRE(cmd_solve(config) == kExitOk);
  std::ifstream in(dir / "receiver.csv");
  std::string line;
  std::getline(in, line);
  bool saw_nonzero = false;
  while (std::getline(in, line)) {
    const double t = std::stod(line.substr(0, line.find(',')));
    const double value = std::stod(line.substr(line.find(',') + 1));
    if (t <= 0.1) CHECK(value == 0.0);
    if (value != 0.0) saw_nonzero = true;
  }
  CHECK(saw_nonzero);
  fs::remove_all(dir);
}

TEST_CASE("cmd_solve: config validation failures exit with code 2") {
  RunConfig bad = small_config("unused", "manufactured");
  bad.degree = 0;
  CHECK(cmd_solve(bad) == kExitConfigError);
  bad = small_config("unused", "no-such-problem");
  CHECK(cmd_solve(bad) == kExitConfigError);
}

TEST_CASE("config file: parse errors and field errors") {
  const fs::path dir = fresh_dir("vemdg_cli_cfg");
  {
    std::ofstream out(dir / "bad.json");
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_run_config((dir / "bad.json").string()), ConfigError);
  {
    std::ofstream out(dir / "bad2.json");
    out << R"({"degree": -1})";
  }
  CHECK_THROWS_AS(load_run_config((dir / "bad2.json").string()), ConfigError);
  CHECK_THROWS_AS(load_run_config((dir / "missing.json").string()), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("cmd_mesh_gen: file output loads back") {
  const fs::path dir = fresh_dir("vemdg_cli_mesh");
  MeshGenOptions options;
  options.type = "voronoi";
  options.n = 16;
  options.seed = 4;
  options.out = (dir / "mesh.json").string();
  REQUIRE(cmd_mesh_gen(options) == kExitOk);
  const PolygonalMesh mesh = read_mesh(options.out);
  CHECK(mesh.n_cells() == 16);

  options.type = "spiral";
  CHECK(cmd_mesh_gen(options) == kExitConfigError);
  fs::remove_all(dir);
}

TEST_CASE("cmd_verify: degenerate single-level study surfaces a nonzero exit") {
  const fs::path dir = fresh_dir("vemdg_cli_onelevel");
  VerifyOptions options;
  options.output_dir = dir.string();
  options.quick = true;
  options.space_study = false;
  options.combined_study = false;
  options.max_levels = 1;  // rate fitting needs at least 3 levels
  CHECK(cmd_verify(options) == kExitConfigError);
  fs::remove_all(dir);
}

TEST_CASE("cmd_verify: quick studies write CSVs and plot data") {
  const fs::path dir = fresh_dir("vemdg_cli_quick");
  VerifyOptions options;
  options.output_dir = dir.string();
  options.quick = true;
  options.space_study = false;  // keep the smoke test fast
  REQUIRE(cmd_verify(options) == kExitOk);
  CHECK(fs::exists(dir / "time_study.csv"));
  CHECK(fs::exists(dir / "combined_study.csv"));
  CHECK(fs::exists(dir / "slopes.csv"));
  CHECK(fs::exists(dir / "plot_time_k2_r2.dat"));
  CHECK(fs::exists(dir / "manifest.json"));
  fs::remove_all(dir);
}

TEST_CASE("cmd_solve: matrix dumps on demand") {
  const fs::path dir = fresh_dir("vemdg_cli_dump");
  RunConfig config = small_config(dir.string(), "zero");
  config.dump_matrices = true;
  REQUIRE(cmd_solve(config) == kExitOk);
  CHECK(fs::exists(dir / "mass.mtx"));
  CHECK(fs::exists(dir / "stiffness.mtx"));
  CHECK(fs::exists(dir / "dof_map.csv"));
  fs::remove_all(dir);
}
