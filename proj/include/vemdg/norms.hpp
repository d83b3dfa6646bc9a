#pragma once

#include "vemdg/problem.hpp"
#include "vemdg/solution.hpp"

namespace vemdg {

/// Squared contributions of the DG energy norm; total() is the squared norm.
struct EnergyBreakdown {
  double dissipation = 0.0;           // nu sum_n int_In |V'|_M^2
  double velocity_initial = 0.0;      // 1/2 |V'(0+)|_M^2
  double velocity_jumps = 0.0;        // 1/2 sum |[V']_n|_M^2
  double velocity_final = 0.0;        // 1/2 |V'(T-)|_M^2
  double displacement_initial = 0.0;  // 1/2 |V(0+)|_A^2
  double displacement_jumps = 0.0;
  double displacement_final = 0.0;

  double total() const {
    return dissipation + velocity_initial + velocity_jumps + velocity_final +
           displacement_initial + displacement_jumps + displacement_final;
  }
  double norm() const { return std::sqrt(std::max(total(), 0.0)); }
};

/// Energy norm of a discrete trajectory (vector viewpoint: quadratic forms in
/// the assembled M and A; no matrix square roots anywhere).
EnergyBreakdown energy_norm(const DiscreteTrajectory& traj, const SparseMatrixd& M,
                            const SparseMatrixd& A, double nu);

/// Same quantity assembled cell by cell through the local forms (function
/// viewpoint of the triple norm). Used to exercise the norm-equivalence path;
/// needs the space to expand interior DOFs.
EnergyBreakdown triple_norm_elementwise(const DiscreteTrajectory& traj, const VemSpace& space,
                                        double nu);

/// Space-time bilinear form of the fully discrete scheme evaluated on
/// trajectories (integrals by Gauss quadrature, upwind trace/jump terms,
/// initial terms). Satisfies bilinear_form(W, W) = energy_norm(W)^2.
double bilinear_form(const DiscreteTrajectory& V, const DiscreteTrajectory& W,
                     const SparseMatrixd& M, const SparseMatrixd& A, double nu);

struct FinalTimeError {
  double h1 = 0.0;      // sqrt(e^T A e)
  double l2 = 0.0;      // sqrt(edot^T M edot)
  double energy = 0.0;  // sqrt(e^T A e + edot^T M edot)
};

/// Final-time energy error against the VE interpolant of the exact solution
/// (left limit at T).
FinalTimeError final_time_error(const SpaceTimeSolution& solution, const ScalarField& u_exact,
                                const ScalarField& ut_exact);

/// Full-history triple norm of (interpolant of u_ex) - u_htau; the exact
/// time derivative is needed for the dissipation and velocity terms.
EnergyBreakdown interpolant_error_triple_norm(
    const SpaceTimeSolution& solution,
    const std::function<double(const Eigen::Vector2d&, double)>& u_exact,
    const std::function<double(const Eigen::Vector2d&, double)>& ut_exact, double nu);

/// sqrt( ||F||^2_{L2(0,T)} + U0^T A U0 + Z0^T M Z0 ), the stability-bound data
/// functional.
double data_norm(const ProjectedLoad& load, const TimePartition& partition,
                 const Eigen::VectorXd& U0, const Eigen::VectorXd& Z0, const SparseMatrixd& M,
                 const SparseMatrixd& A);

}  // namespace vemdg
