#include "vemdg/spectral.hpp"

#include <cmath>

namespace vemdg {

SpectralSolution::SpectralSolution(const VemSpace& space, double nu, const Eigen::VectorXd& U0,
                                   const Eigen::VectorXd& Z0, LoadFunction load,
                                   int points_per_panel)
    : space_(&space), nu_(nu), load_(std::move(load)), points_per_panel_(points_per_panel) {
  const GeneralizedEig eig = generalized_eigh(space.stiffness, space.mass);
  dec_.lambda = eig.values;
  dec_.modes = eig.vectors;
  if (dec_.lambda.size() == 0) throw LinalgError("SpectralSolution: empty system");
  if (dec_.lambda[0] <= 0.25 * nu * nu)
    throw LinalgError(
        "SpectralSolution: lambda_1 <= nu^2/4, the oscillatory representation requires "
        "nu small enough that every lambda - nu^2/4 stays positive");
  dec_.omega = (dec_.lambda.array() - 0.25 * nu * nu).sqrt();

  // homogeneous part from the initial data: per mode with c = m_h(u0, w),
  // d = m_h(z0, w),
  //   gamma_h(t) = e^{-nu t/2} [ c cos(w t) + (d + nu c / 2) / w sin(w t) ]
  const Eigen::VectorXd c = dec_.modes.transpose() * (space.mass * U0);
  const Eigen::VectorXd d = dec_.modes.transpose() * (space.mass * Z0);
  coef_cos_ = c;
  coef_sin_ = ((d.array() + 0.5 * nu * c.array()) / dec_.omega.array()).matrix();

  for (const auto& term : load_.terms)
    load_modes_.push_back(dec_.modes.transpose() * project_load(space, term.spatial));
  panel_rule_ = gauss_legendre(points_per_panel_);
}

double SpectralSolution::mode_load(int n, double s) const {
  double g = 0.0;
  for (std::size_t i = 0; i < load_modes_.size(); ++i)
    g += load_modes_[i][n] * load_.terms[i].temporal(s);
  if (load_.general) {
    const Eigen::VectorXd f =
        project_load(*space_, [&](const Eigen::Vector2d& x) { return load_.general(x, s); });
    g += dec_.modes.col(n).dot(f);
  }
  return g;
}

double SpectralSolution::duhamel(int n, double t, int order) const {
  if (t <= 0.0 || load_.empty()) return 0.0;
  const double w = dec_.omega[n];
  const int n_panels = std::max(1, static_cast<int>(std::ceil(t * w / (2.0 * M_PI))));
  double integral = 0.0;
  for (int p = 0; p < n_panels; ++p) {
    const double a = t * p / n_panels;
    const double b = t * (p + 1) / n_panels;
    const Rule1d rule = map_to_interval(panel_rule_, a, b);
    for (int q = 0; q < rule.nodes.size(); ++q) {
      const double s = rule.nodes[q];
      const double e = std::exp(-0.5 * nu_ * (t - s));
      const double sn = std::sin(w * (t - s));
      const double cs = std::cos(w * (t - s));
      double kernel = 0.0;
      switch (order) {
        case 0: kernel = e * sn / w; break;
        case 1: kernel = e * (cs - 0.5 * nu_ * sn / w); break;
        case 2: kernel = e * (-nu_ * cs + (0.25 * nu_ * nu_ / w - w) * sn); break;
      }
      integral += rule.weights[q] * kernel * mode_load(n, s);
    }
  }
  if (order == 2) integral += mode_load(n, t);  // boundary term of the second derivative
  return integral;
}

double SpectralSolution::gamma(int n, double t, int order) const {
  const double w = dec_.omega[n];
  double a = coef_cos_[n];
  double b = coef_sin_[n];
  for (int o = 0; o < order; ++o) {
    const double a_next = -0.5 * nu_ * a + b * w;
    const double b_next = -0.5 * nu_ * b - a * w;
    a = a_next;
    b = b_next;
  }
  const double hom = std::exp(-0.5 * nu_ * t) * (a * std::cos(w * t) + b * std::sin(w * t));
  return hom + duhamel(n, t, order);
}

Eigen::VectorXd SpectralSolution::value(double t) const {
  Eigen::VectorXd g(dec_.lambda.size());
  for (int n = 0; n < g.size(); ++n) g[n] = gamma(n, t, 0);
  return dec_.modes * g;
}

Eigen::VectorXd SpectralSolution::velocity(double t) const {
  Eigen::VectorXd g(dec_.lambda.size());
  for (int n = 0; n < g.size(); ++n) g[n] = gamma(n, t, 1);
  return dec_.modes * g;
}

Eigen::VectorXd SpectralSolution::acceleration(double t) const {
  Eigen::VectorXd g(dec_.lambda.size());
  for (int n = 0; n < g.size(); ++n) g[n] = gamma(n, t, 2);
  return dec_.modes * g;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> spectral_semidiscrete(
    const VemSpace& space, const WaveProblem& problem, const Eigen::VectorXd& eval_times) {
  problem.validate();
  const auto zero = [](const Eigen::Vector2d&) { return 0.0; };
  const Eigen::VectorXd U0 = restrict_interior(
      space, interpolate(space, problem.initial_value ? problem.initial_value : ScalarField(zero)));
  const Eigen::VectorXd Z0 = restrict_interior(
      space,
      interpolate(space, problem.initial_velocity ? problem.initial_velocity : ScalarField(zero)));
  const SpectralSolution sol(space, problem.nu, U0, Z0, problem.load);
  Eigen::MatrixXd U(space.n_interior, eval_times.size());
  Eigen::MatrixXd V(space.n_interior, eval_times.size());
  for (int j = 0; j < eval_times.size(); ++j) {
    U.col(j) = sol.value(eval_times[j]);
    V.col(j) = sol.velocity(eval_times[j]);
  }
  return {U, V};
}

}  // namespace vemdg
