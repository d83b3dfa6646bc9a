#pragma once

#include "vemdg/problem.hpp"

namespace vemdg {

struct NewmarkOptions {
  double beta = 0.25;  // average acceleration
  double gamma = 0.5;
};

struct NewmarkTrajectory {
  Eigen::VectorXd times;
  std::vector<Eigen::VectorXd> displacement;  // interior DOFs per step
  std::vector<Eigen::VectorXd> velocity;
  std::vector<Eigen::VectorXd> acceleration;

  int n_steps() const { return static_cast<int>(times.size()) - 1; }

  /// Conserved-quantity probe 1/2 vᵀMv + 1/2 dᵀAd at step i.
  double energy(int i, const SparseMatrixd& M, const SparseMatrixd& A) const {
    return 0.5 * velocity[i].dot(M * velocity[i]) + 0.5 * displacement[i].dot(A * displacement[i]);
  }
};

/// Newmark-beta integration of M u'' + nu M u' + A u = F(t) with uniform step
/// dt; the damping matrix is C = nu M and the initial acceleration solves
/// M a0 = F(0) - C z0 - A u0.
NewmarkTrajectory solve_newmark(const WaveProblem& problem, const VemSpace& space, double dt,
                                const NewmarkOptions& options = {});

}  // namespace vemdg
