#pragma once

#include <functional>
#include <memory>

#include "vemdg/mesh_gen.hpp"
#include "vemdg/newmark.hpp"
#include "vemdg/norms.hpp"
#include "vemdg/rates.hpp"
#include "vemdg/solver.hpp"
#include "vemdg/spectral.hpp"

namespace vemdg {

/// Manufactured verification scenario on (0,1)^2 x (0,T]:
/// u(t,x) = sin(t^2) sin(pi x1) sin(pi x2), load and data back-computed.
struct ManufacturedCase {
  WaveProblem problem;
  std::function<double(const Eigen::Vector2d&, double)> u;
  std::function<double(const Eigen::Vector2d&, double)> u_t;

  ScalarField u_at(double t) const {
    return [f = u, t](const Eigen::Vector2d& x) { return f(x, t); };
  }
  ScalarField ut_at(double t) const {
    return [f = u_t, t](const Eigen::Vector2d& x) { return f(x, t); };
  }
};
ManufacturedCase manufactured_case(double nu = 1.0, double T = 1.0);

/// Validation scenario: nu = 0, zero data, smooth impulse
/// f = 100 exp(-|x-x0|^4 / s^2) switched on at t >= 0.1, x0 = (0.05, 0.05),
/// s = 0.025.
WaveProblem impulse_case(double T = 1.0);

/// Fixed-seed Lloyd-relaxed Voronoi meshes used by the convergence studies
/// (100 cells for the time study; the 50/200/800/3200 family for the space
/// study). Deterministic; results are cached per process.
std::shared_ptr<const PolygonalMesh> study_mesh(int n_cells);

struct StudyRow {
  double h = 0.0;
  double dt = 0.0;
  int k = 0;
  int r = 0;
  FinalTimeError error;       // final-time energy error (T-trace restriction)
  double triple_norm = -1.0;  // full-history triple norm of I_h u_ex - u_htau
};

/// Solve + error metrics for one configuration. The full-history triple norm
/// is only computed on demand (it needs interpolants at every quadrature
/// time). The time study fits it (the T-trace error superconverges at slab
/// ends and cannot exhibit the dt^{r-1/2} law); the space and combined
/// studies fit the final-time energy error.
StudyRow run_manufactured_level(const ManufacturedCase& mc, std::shared_ptr<const VemSpace> space,
                                int r, int n_slabs, const MarchOptions& options,
                                bool with_triple_norm = false);

struct StudySeries {
  int k = 0;
  int r = 0;
  std::vector<StudyRow> rows;
  RateFit fit;
};

struct TimeStudyConfig {
  int mesh_cells = 100;
  int k = 4;
  std::vector<int> r_values = {1, 2, 3};
  std::vector<int> slab_counts = {4, 8, 16, 32};  // dt = T / count
  double nu = 1.0;
  double T = 1.0;
};
std::vector<StudySeries> run_time_study(const TimeStudyConfig& config,
                                        const MarchOptions& options);

struct SpaceStudyConfig {
  std::vector<int> mesh_family = {50, 200, 800, 3200};
  std::vector<int> k_values = {1, 2, 3};
  int r = 4;
  double dt = 0.01;
  double nu = 1.0;
  double T = 1.0;
};
std::vector<StudySeries> run_space_study(const SpaceStudyConfig& config,
                                         const MarchOptions& options);

struct CombinedStudyConfig {
  int k = 2;  // r = k
  std::vector<std::pair<int, int>> levels = {{50, 8}, {200, 16}, {800, 32}};  // (cells, slabs)
  double nu = 1.0;
  double T = 1.0;
};
StudySeries run_combined_study(const CombinedStudyConfig& config, const MarchOptions& options);

/// Receiver time histories sampled on a fixed grid.
Eigen::VectorXd receiver_history(const SpaceTimeSolution& solution, const Eigen::Vector2d& x,
                                 const Eigen::VectorXd& times);
/// Newmark history at times that must coincide with integration steps.
Eigen::VectorXd receiver_history(const NewmarkTrajectory& trajectory, const VemSpace& space,
                                 const Eigen::Vector2d& x, const Eigen::VectorXd& times);
/// Trapezoidal L2 norm of (values - reference) over the sampled grid.
double history_l2_error(const Eigen::VectorXd& times, const Eigen::VectorXd& values,
                        const Eigen::VectorXd& reference);

struct ValidationConfig {
  int mesh_cells = 800;        // 3200 in the full (paper-scale) setting
  int k = 2;
  int r = 2;
  int reference_slabs = 160;   // dt = 1/160 reduced, 1/320 full
  double vemdg_dt = 1.0 / 20;
  std::vector<double> newmark_dts = {1.0 / 20, 1.0 / 40, 1.0 / 80};
  double T = 1.0;
  Eigen::Vector2d receiver = Eigen::Vector2d(0.5, 0.5);
  int samples = 20;  // history grid t_j = j T / samples
  bool self_check = false;  // rerun the reference with halved dt
};

struct ValidationOutcome {
  Eigen::VectorXd times;
  Eigen::VectorXd reference;
  Eigen::VectorXd vemdg;
  std::vector<Eigen::VectorXd> newmark;
  double vemdg_error = 0.0;
  std::vector<double> newmark_errors;
  double reference_self_change = -1.0;  // relative L2 change, -1 when not run
};
ValidationOutcome run_validation(const ValidationConfig& config, const MarchOptions& options);

}  // namespace vemdg
