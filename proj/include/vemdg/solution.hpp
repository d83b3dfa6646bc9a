#pragma once

#include <memory>
#include <vector>

#include "vemdg/slab_basis.hpp"
#include "vemdg/time_partition.hpp"
#include "vemdg/vem_space.hpp"

namespace vemdg {

/// Piecewise-polynomial-in-time DOF trajectory: on slab n the coefficient
/// matrix has one row per DOF and one column per temporal basis function.
struct DiscreteTrajectory {
  TimePartition partition;
  std::vector<SlabBasis> bases;
  std::vector<Eigen::MatrixXd> coeffs;

  int dim() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs[0].rows()); }
  int n_slabs() const { return static_cast<int>(coeffs.size()); }

  /// Value at t with the left-limit convention at slab break points.
  Eigen::VectorXd value(double t) const;
  Eigen::VectorXd derivative(double t) const;

  Eigen::VectorXd start_value(int n) const;       // t_{n-1}^+
  Eigen::VectorXd end_value(int n) const;         // t_n^-
  Eigen::VectorXd start_derivative(int n) const;
  Eigen::VectorXd end_derivative(int n) const;
};

/// Fully discrete solution: interior-DOF trajectory plus the space needed to
/// evaluate it pointwise through the per-cell L2 polynomial.
struct SpaceTimeSolution {
  std::shared_ptr<const VemSpace> space;
  DiscreteTrajectory trajectory;
  Eigen::VectorXd initial_value;      // U_{h,0} (interior DOFs)
  Eigen::VectorXd initial_derivative; // Z_{h,0}

  /// Point value at (x, t); slab break points use the left limit. cell_hint
  /// caches the located cell across calls with a fixed x.
  double evaluate(const Eigen::Vector2d& x, double t, int* cell_hint = nullptr) const;
};

}  // namespace vemdg
