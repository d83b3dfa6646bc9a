#include <CLI11.hpp>

#include "vemdg/cli.hpp"

using namespace vemdg;

int main(int argc, char** argv) {
  CLI::App app{"vemdg: tensor-product VEM-DG solver for the 2D dissipative wave equation"};
  app.require_subcommand(1);

  // mesh gen
  auto* mesh = app.add_subcommand("mesh", "mesh utilities");
  mesh->require_subcommand(1);
  auto* gen = mesh->add_subcommand("gen", "generate a polygonal mesh");
  MeshGenOptions mesh_options;
  gen->add_option("--type", mesh_options.type, "grid | voronoi")->default_val("voronoi");
  gen->add_option("--n", mesh_options.n, "voronoi cell count (also sets nx=ny for grids)");
  gen->add_option("--nx", mesh_options.nx, "grid cells in x");
  gen->add_option("--ny", mesh_options.ny, "grid cells in y");
  gen->add_option("--seed", mesh_options.seed, "random seed");
  gen->add_option("--lloyd", mesh_options.lloyd_iters, "Lloyd iterations");
  gen->add_option("--out", mesh_options.out, "output mesh JSON path")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "one-shot solve from a config file");
  std::string config_path;
  RunConfig overrides;
  bool has_config = false;
  solve->add_option("--config", config_path, "JSON config file");
  auto* opt_degree = solve->add_option("--degree", overrides.degree, "VEM degree k");
  auto* opt_slabs = solve->add_option("--slabs", overrides.time.slabs, "number of time slabs");
  auto* opt_r = solve->add_option("--r", overrides.time.r, "DG time degree");
  auto* opt_T = solve->add_option("--T", overrides.time.T, "final time");
  auto* opt_nu = solve->add_option("--nu", overrides.nu, "dissipation coefficient");
  auto* opt_problem =
      solve->add_option("--problem", overrides.problem, "manufactured | impulse | zero");
  auto* opt_out = solve->add_option("--out", overrides.output_dir, "output directory");
  auto* opt_solver = solve->add_option("--solver", overrides.solver, "auto | dense | sparse | kron");
  auto* opt_mesh_type = solve->add_option("--mesh-type", overrides.mesh.type, "grid | voronoi | file");
  auto* opt_mesh_n = solve->add_option("--mesh-n", overrides.mesh.n, "voronoi cells");
  auto* opt_mesh_nx = solve->add_option("--mesh-nx", overrides.mesh.nx, "grid nx");
  auto* opt_mesh_ny = solve->add_option("--mesh-ny", overrides.mesh.ny, "grid ny");
  auto* opt_mesh_seed = solve->add_option("--mesh-seed", overrides.mesh.seed, "mesh seed");
  auto* opt_mesh_path = solve->add_option("--mesh-file", overrides.mesh.path, "mesh JSON file");
  auto* opt_dump = solve->add_flag("--dump-matrices", overrides.dump_matrices,
                                   "dump MatrixMarket matrices and the DOF map");
  auto* opt_triple = solve->add_flag("--triple-norm", overrides.triple_norm,
                                     "also report the full-history interpolant triple norm");

  // verify / validate
  auto* verify = app.add_subcommand("verify", "run the manufactured-solution convergence studies");
  VerifyOptions verify_options;
  verify->add_option("--out", verify_options.output_dir, "output directory");
  verify->add_flag("!--no-time", verify_options.time_study, "skip the time-refinement study");
  verify->add_flag("!--no-space", verify_options.space_study, "skip the space-refinement study");
  verify->add_flag("!--no-combined", verify_options.combined_study, "skip the combined study");
  verify->add_flag("--paper-exact", verify_options.paper_exact,
                   "space study with r=6, dt=0.1 instead of r=4, dt=0.01");
  verify->add_flag("--quick", verify_options.quick, "small smoke-test studies (no gating)");
  verify->add_option("--max-levels", verify_options.max_levels,
                     "truncate every study to this many refinement levels");
  verify->add_option("--solver", verify_options.solver, "auto | dense | sparse | kron");

  auto* validate = app.add_subcommand("validate", "impulse scenario with the Newmark comparison");
  ValidateOptions validate_options;
  validate->add_option("--out", validate_options.output_dir, "output directory");
  bool full_scale = false;
  validate->add_flag("--full", full_scale, "paper-scale reference (3200 cells, dt=1/320)");
  validate->add_flag("--self-check", validate_options.self_check,
                     "verify the reference by halving its time step");
  validate->add_option("--solver", validate_options.solver, "auto | dense | sparse | kron");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  if (gen->parsed()) {
    if (gen->count("--n") && !gen->count("--nx")) mesh_options.nx = mesh_options.n;
    if (gen->count("--n") && !gen->count("--ny")) mesh_options.ny = mesh_options.n;
    return cmd_mesh_gen(mesh_options);
  }
  if (solve->parsed()) {
    RunConfig config;
    has_config = solve->count("--config") > 0;
    if (has_config) {
      try {
        config = load_run_config(config_path);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
      }
    }
    if (*opt_degree) config.degree = overrides.degree;
    if (*opt_slabs) config.time.slabs = overrides.time.slabs;
    if (*opt_r) config.time.r = overrides.time.r;
    if (*opt_T) config.time.T = overrides.time.T;
    if (*opt_nu) config.nu = overrides.nu;
    if (*opt_problem) config.problem = overrides.problem;
    if (*opt_out) config.output_dir = overrides.output_dir;
    if (*opt_solver) config.solver = overrides.solver;
    if (*opt_mesh_type) config.mesh.type = overrides.mesh.type;
    if (*opt_mesh_n) config.mesh.n = overrides.mesh.n;
    if (*opt_mesh_nx) config.mesh.nx = overrides.mesh.nx;
    if (*opt_mesh_ny) config.mesh.ny = overrides.mesh.ny;
    if (*opt_mesh_seed) config.mesh.seed = overrides.mesh.seed;
    if (*opt_mesh_path) config.mesh.path = overrides.mesh.path;
    if (*opt_dump) config.dump_matrices = overrides.dump_matrices;
    if (*opt_triple) config.triple_norm = overrides.triple_norm;
    return cmd_solve(config);
  }
  if (verify->parsed()) return cmd_verify(verify_options);
  if (validate->parsed()) {
    validate_options.reduced = !full_scale;
    return cmd_validate(validate_options);
  }
  return kExitConfigError;
}
