#pragma once

#include "vemdg/problem.hpp"

namespace vemdg {

struct SpectralDecomposition {
  Eigen::VectorXd lambda;  // ascending generalized eigenvalues of (A, M)
  Eigen::MatrixXd modes;   // M-orthonormal columns
  Eigen::VectorXd omega;   // sqrt(lambda - nu^2/4)
};

/// Semi-discrete solution by eigen-expansion: u_h(t) = sum_n gamma_n(t) w^(n)
/// with per-mode damped-oscillator coefficients and a Duhamel load integral
/// evaluated by frequency-aware composite Gauss panels. Valid while
/// lambda_1 > nu^2/4; intended as a small-mesh oracle.
class SpectralSolution {
 public:
  SpectralSolution(const VemSpace& space, double nu, const Eigen::VectorXd& U0,
                   const Eigen::VectorXd& Z0, LoadFunction load, int points_per_panel = 10);

  const SpectralDecomposition& decomposition() const { return dec_; }

  Eigen::VectorXd value(double t) const;
  Eigen::VectorXd velocity(double t) const;
  /// Second derivative from its own integral representation (not from the
  /// ODE), so residual checks against M u'' + nu M u' + A u = F are genuine.
  Eigen::VectorXd acceleration(double t) const;

  /// Envelope data for decay checks: |gamma_n(t)| splits into the homogeneous
  /// amplitude and the Duhamel part.
  double mode_amplitude(int n) const { return std::hypot(coef_cos_[n], coef_sin_[n]); }

 private:
  double gamma(int n, double t, int order) const;
  double mode_load(int n, double s) const;
  double duhamel(int n, double t, int order) const;

  const VemSpace* space_;
  double nu_;
  SpectralDecomposition dec_;
  Eigen::VectorXd coef_cos_, coef_sin_;  // homogeneous coefficients per mode
  std::vector<Eigen::VectorXd> load_modes_;  // per separable term: W^T F_X
  LoadFunction load_;
  int points_per_panel_;
  Rule1d panel_rule_;
};

/// DOF trajectories (U, U_dot) column-per-time, per the Appendix oracle.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> spectral_semidiscrete(
    const VemSpace& space, const WaveProblem& problem, const Eigen::VectorXd& eval_times);

}  // namespace vemdg
