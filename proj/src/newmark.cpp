#include "vemdg/newmark.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>

namespace vemdg {

NewmarkTrajectory solve_newmark(const WaveProblem& problem, const VemSpace& space, double dt,
                                const NewmarkOptions& options) {
  problem.validate();
  if (dt <= 0.0) throw std::invalid_argument("solve_newmark: dt must be positive");
  const int n_steps = static_cast<int>(std::llround(problem.final_time / dt));
  if (std::abs(n_steps * dt - problem.final_time) > 1e-10 * problem.final_time)
    throw std::invalid_argument("solve_newmark: dt must divide T");

  const double beta = options.beta;
  const double gamma = options.gamma;
  const double nu = problem.nu;
  const SparseMatrixd& M = space.mass;
  const SparseMatrixd& A = space.stiffness;

  const auto zero = [](const Eigen::Vector2d&) { return 0.0; };
  Eigen::VectorXd u = restrict_interior(
      space, interpolate(space, problem.initial_value ? problem.initial_value : ScalarField(zero)));
  Eigen::VectorXd v = restrict_interior(
      space,
      interpolate(space, problem.initial_velocity ? problem.initial_velocity : ScalarField(zero)));

  const ProjectedLoad load(space, problem.load);
  const auto force = [&](double t) {
    return load.empty() ? Eigen::VectorXd(Eigen::VectorXd::Zero(space.n_interior)) : load.at(t);
  };

  Eigen::SimplicialLDLT<SparseMatrixd> mass_solver(M);
  if (mass_solver.info() != Eigen::Success)
    throw LinalgError("solve_newmark: mass factorization failed");
  Eigen::VectorXd a = mass_solver.solve(force(0.0) - nu * (M * v) - A * u);

  // effective matrix M + gamma dt C + beta dt^2 A with C = nu M
  SparseMatrixd K_eff = (1.0 + gamma * dt * nu) * M + (beta * dt * dt) * A;
  Eigen::SimplicialLDLT<SparseMatrixd> eff_solver(K_eff);
  if (eff_solver.info() != Eigen::Success)
    throw LinalgError("solve_newmark: effective matrix factorization failed");

  NewmarkTrajectory out;
  out.times.resize(n_steps + 1);
  out.displacement.reserve(n_steps + 1);
  out.velocity.reserve(n_steps + 1);
  out.acceleration.reserve(n_steps + 1);
  out.times[0] = 0.0;
  out.displacement.push_back(u);
  out.velocity.push_back(v);
  out.acceleration.push_back(a);

  for (int s = 1; s <= n_steps; ++s) {
    const double t = s * dt;
    const Eigen::VectorXd u_pred = u + dt * v + dt * dt * (0.5 - beta) * a;
    const Eigen::VectorXd v_pred = v + dt * (1.0 - gamma) * a;
    a = eff_solver.solve(force(t) - nu * (M * v_pred) - A * u_pred);
    u = u_pred + beta * dt * dt * a;
    v = v_pred + gamma * dt * a;
    out.times[s] = t;
    out.displacement.push_back(u);
    out.velocity.push_back(v);
    out.acceleration.push_back(a);
  }
  return out;
}

}  // namespace vemdg
