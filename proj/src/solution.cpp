#include "vemdg/solution.hpp"

namespace vemdg {

Eigen::VectorXd DiscreteTrajectory::value(double t) const {
  const int n = partition.slab_of(t);
  return coeffs[n] * bases[n].values(t);
}

Eigen::VectorXd DiscreteTrajectory::derivative(double t) const {
  const int n = partition.slab_of(t);
  return coeffs[n] * bases[n].derivatives(t);
}

Eigen::VectorXd DiscreteTrajectory::start_value(int n) const {
  return coeffs[n] * bases[n].values(partition.start(n));
}

Eigen::VectorXd DiscreteTrajectory::end_value(int n) const {
  return coeffs[n] * bases[n].values(partition.end(n));
}

Eigen::VectorXd DiscreteTrajectory::start_derivative(int n) const {
  return coeffs[n] * bases[n].derivatives(partition.start(n));
}

Eigen::VectorXd DiscreteTrajectory::end_derivative(int n) const {
  return coeffs[n] * bases[n].derivatives(partition.end(n));
}

double SpaceTimeSolution::evaluate(const Eigen::Vector2d& x, double t, int* cell_hint) const {
  const double T = trajectory.partition.total_time();
  if (t < -1e-12 * T || t > T * (1.0 + 1e-12))
    throw MeshError("SpaceTimeSolution::evaluate: time outside [0, T]");
  return evaluate_field(*space, trajectory.value(t), x, cell_hint);
}

}  // namespace vemdg
