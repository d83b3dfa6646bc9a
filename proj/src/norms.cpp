#include "vemdg/norms.hpp"

namespace vemdg {

namespace {

double quad_form(const SparseMatrixd& M, const Eigen::VectorXd& v) { return v.dot(M * v); }

}  // namespace

EnergyBreakdown energy_norm(const DiscreteTrajectory& traj, const SparseMatrixd& M,
                            const SparseMatrixd& A, double nu) {
  EnergyBreakdown out;
  const int n_slabs = traj.n_slabs();
  if (n_slabs == 0 || traj.dim() == 0) return out;

  for (int n = 0; n < n_slabs; ++n) {
    const SlabBasis& basis = traj.bases[n];
    const Rule1d rule = map_to_interval(gauss_legendre(basis.size()), basis.t0, basis.t1);
    for (int q = 0; q < rule.nodes.size(); ++q) {
      const Eigen::VectorXd vdot = traj.coeffs[n] * basis.derivatives(rule.nodes[q]);
      out.dissipation += nu * rule.weights[q] * quad_form(M, vdot);
    }
  }
  out.velocity_initial = 0.5 * quad_form(M, traj.start_derivative(0));
  out.displacement_initial = 0.5 * quad_form(A, traj.start_value(0));
  for (int n = 0; n + 1 < n_slabs; ++n) {
    out.velocity_jumps +=
        0.5 * quad_form(M, traj.start_derivative(n + 1) - traj.end_derivative(n));
    out.displacement_jumps += 0.5 * quad_form(A, traj.start_value(n + 1) - traj.end_value(n));
  }
  out.velocity_final = 0.5 * quad_form(M, traj.end_derivative(n_slabs - 1));
  out.displacement_final = 0.5 * quad_form(A, traj.end_value(n_slabs - 1));
  return out;
}

EnergyBreakdown triple_norm_elementwise(const DiscreteTrajectory& traj, const VemSpace& space,
                                        double nu) {
  EnergyBreakdown out;
  const int n_slabs = traj.n_slabs();
  if (n_slabs == 0) return out;

  // local quadratic form summed over cells: v -> sum_E v_E^T K_E v_E
  const auto local_form = [&](const Eigen::VectorXd& interior, bool use_mass) {
    const Eigen::VectorXd full = extend_zero(space, interior);
    double sum = 0.0;
    for (int c = 0; c < space.mesh->n_cells(); ++c) {
      const auto& el = space.elements[c];
      const auto& map = space.cell_dofs[c];
      Eigen::VectorXd local(el.n_dofs);
      for (int i = 0; i < el.n_dofs; ++i) local[i] = full[map[i]];
      sum += local.dot((use_mass ? el.mass : el.stiffness) * local);
    }
    return sum;
  };

  for (int n = 0; n < n_slabs; ++n) {
    const SlabBasis& basis = traj.bases[n];
    const Rule1d rule = map_to_interval(gauss_legendre(basis.size()), basis.t0, basis.t1);
    for (int q = 0; q < rule.nodes.size(); ++q) {
      const Eigen::VectorXd vdot = traj.coeffs[n] * basis.derivatives(rule.nodes[q]);
      out.dissipation += nu * rule.weights[q] * local_form(vdot, true);
    }
  }
  out.velocity_initial = 0.5 * local_form(traj.start_derivative(0), true);
  out.displacement_initial = 0.5 * local_form(traj.start_value(0), false);
  for (int n = 0; n + 1 < n_slabs; ++n) {
    out.velocity_jumps +=
        0.5 * local_form(traj.start_derivative(n + 1) - traj.end_derivative(n), true);
    out.displacement_jumps +=
        0.5 * local_form(traj.start_value(n + 1) - traj.end_value(n), false);
  }
  out.velocity_final = 0.5 * local_form(traj.end_derivative(n_slabs - 1), true);
  out.displacement_final = 0.5 * local_form(traj.end_value(n_slabs - 1), false);
  return out;
}

double bilinear_form(const DiscreteTrajectory& V, const DiscreteTrajectory& W,
                     const SparseMatrixd& M, const SparseMatrixd& A, double nu) {
  const int n_slabs = V.n_slabs();
  if (n_slabs != W.n_slabs()) throw LinalgError("bilinear_form: slab count mismatch");
  double value = 0.0;
  for (int n = 0; n < n_slabs; ++n) {
    const SlabBasis& bv = V.bases[n];
    const SlabBasis& bw = W.bases[n];
    const int degree = std::max(bv.degree, bw.degree);
    const Rule1d rule =
        map_to_interval(gauss_legendre(degree + 1), bv.t0, bv.t1);
    for (int q = 0; q < rule.nodes.size(); ++q) {
      const double t = rule.nodes[q];
      const double w = rule.weights[q];
      const Eigen::VectorXd v_val = V.coeffs[n] * bv.values(t);
      const Eigen::VectorXd v_dot = V.coeffs[n] * bv.derivatives(t);
      const Eigen::VectorXd v_ddot = V.coeffs[n] * bv.second_derivatives(t);
      const Eigen::VectorXd w_dot = W.coeffs[n] * bw.derivatives(t);
      value += w * (v_ddot.dot(M * w_dot) + nu * v_dot.dot(M * w_dot) + v_val.dot(A * w_dot));
    }
  }
  for (int n = 0; n + 1 < n_slabs; ++n) {
    const Eigen::VectorXd jump_dot = V.start_derivative(n + 1) - V.end_derivative(n);
    const Eigen::VectorXd jump_val = V.start_value(n + 1) - V.end_value(n);
    value += jump_dot.dot(M * W.start_derivative(n + 1));
    value += jump_val.dot(A * W.start_value(n + 1));
  }
  value += V.start_derivative(0).dot(M * W.start_derivative(0));
  value += V.start_value(0).dot(A * W.start_value(0));
  return value;
}

FinalTimeError final_time_error(const SpaceTimeSolution& solution, const ScalarField& u_exact,
                                const ScalarField& ut_exact) {
  const VemSpace& space = *solution.space;
  const int last = solution.trajectory.n_slabs() - 1;
  const Eigen::VectorXd e =
      restrict_interior(space, interpolate(space, u_exact)) - solution.trajectory.end_value(last);
  const Eigen::VectorXd edot = restrict_interior(space, interpolate(space, ut_exact)) -
                               solution.trajectory.end_derivative(last);
  FinalTimeError out;
  out.h1 = std::sqrt(std::max(0.0, e.dot(space.stiffness * e)));
  out.l2 = std::sqrt(std::max(0.0, edot.dot(space.mass * edot)));
  out.energy = std::hypot(out.h1, out.l2);
  return out;
}

EnergyBreakdown interpolant_error_triple_norm(
    const SpaceTimeSolution& solution,
    const std::function<double(const Eigen::Vector2d&, double)>& u_exact,
    const std::function<double(const Eigen::Vector2d&, double)>& ut_exact, double nu) {
  const VemSpace& space = *solution.space;
  const DiscreteTrajectory& traj = solution.trajectory;
  const SparseMatrixd& M = space.mass;
  const SparseMatrixd& A = space.stiffness;
  const auto interp_at = [&](const auto& f, double t) {
    return restrict_interior(space,
                             interpolate(space, [&](const Eigen::Vector2d& x) { return f(x, t); }));
  };

  EnergyBreakdown out;
  const int n_slabs = traj.n_slabs();
  for (int n = 0; n < n_slabs; ++n) {
    const SlabBasis& basis = traj.bases[n];
    // the interpolant is not polynomial in time; bump the order a little
    const Rule1d rule =
        map_to_interval(gauss_legendre(basis.size() + 2), basis.t0, basis.t1);
    for (int q = 0; q < rule.nodes.size(); ++q) {
      const double t = rule.nodes[q];
      const Eigen::VectorXd edot =
          interp_at(ut_exact, t) - traj.coeffs[n] * basis.derivatives(t);
      out.dissipation += nu * rule.weights[q] * edot.dot(M * edot);
    }
  }
  const double T = traj.partition.total_time();
  const Eigen::VectorXd e0dot = interp_at(ut_exact, 0.0) - traj.start_derivative(0);
  const Eigen::VectorXd e0 = interp_at(u_exact, 0.0) - traj.start_value(0);
  out.velocity_initial = 0.5 * e0dot.dot(M * e0dot);
  out.displacement_initial = 0.5 * e0.dot(A * e0);
  for (int n = 0; n + 1 < n_slabs; ++n) {
    // the interpolant trajectory is continuous, so the error jumps are the
    // solution's own jumps
    const Eigen::VectorXd jd = traj.start_derivative(n + 1) - traj.end_derivative(n);
    const Eigen::VectorXd jv = traj.start_value(n + 1) - traj.end_value(n);
    out.velocity_jumps += 0.5 * jd.dot(M * jd);
    out.displacement_jumps += 0.5 * jv.dot(A * jv);
  }
  const Eigen::VectorXd eTdot = interp_at(ut_exact, T) - traj.end_derivative(n_slabs - 1);
  const Eigen::VectorXd eT = interp_at(u_exact, T) - traj.end_value(n_slabs - 1);
  out.velocity_final = 0.5 * eTdot.dot(M * eTdot);
  out.displacement_final = 0.5 * eT.dot(A * eT);
  return out;
}

double data_norm(const ProjectedLoad& load, const TimePartition& partition,
                 const Eigen::VectorXd& U0, const Eigen::VectorXd& Z0, const SparseMatrixd& M,
                 const SparseMatrixd& A) {
  double f_sq = 0.0;
  if (!load.empty()) {
    for (int n = 0; n < partition.n_slabs(); ++n) {
      const Rule1d rule = map_to_interval(
          gauss_legendre(gauss_points_for_degree(2 * partition.degrees[n] + 2)),
          partition.start(n), partition.end(n));
      for (int q = 0; q < rule.nodes.size(); ++q)
        f_sq += rule.weights[q] * load.at(rule.nodes[q]).squaredNorm();
    }
  }
  return std::sqrt(f_sq + U0.dot(A * U0) + Z0.dot(M * Z0));
}

}  // namespace vemdg
