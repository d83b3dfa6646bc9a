#include "vemdg/solver.hpp"

#include <cmath>

namespace vemdg {

SpaceTimeSolution solve_vemdg(const WaveProblem& problem, std::shared_ptr<const VemSpace> space,
                              const TimePartition& partition, const MarchOptions& options) {
  problem.validate();
  partition.validate();
  if (std::abs(partition.total_time() - problem.final_time) >
      1e-12 * std::max(problem.final_time, 1.0))
    throw std::invalid_argument("solve_vemdg: partition end does not match the problem's T");

  const auto zero = [](const Eigen::Vector2d&) { return 0.0; };
  const Eigen::VectorXd U0 =
      restrict_interior(*space, interpolate(*space, problem.initial_value ? problem.initial_value
                                                                          : ScalarField(zero)));
  const Eigen::VectorXd Z0 =
      restrict_interior(*space, interpolate(*space, problem.initial_velocity
                                                        ? problem.initial_velocity
                                                        : ScalarField(zero)));
  return march(space, partition, problem.nu, problem.load, U0, Z0, options);
}

}  // namespace vemdg
