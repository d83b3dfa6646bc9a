#pragma once

#include <Eigen/Dense>

#include <vector>

namespace vemdg {

/// Values of the Legendre polynomials P_0..P_n at x, with first and second
/// derivatives. Any of the output pointers may be null.
void legendre_all(int n, double x, Eigen::VectorXd* values, Eigen::VectorXd* first,
                  Eigen::VectorXd* second);

/// 1D nodes/weights on the reference interval [-1, 1].
struct Rule1d {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1.
Rule1d gauss_legendre(int n);

/// n-point Gauss-Lobatto rule (n >= 2), includes both endpoints, exact for
/// degree 2n-3.
Rule1d gauss_lobatto(int n);

Rule1d map_to_interval(const Rule1d& rule, double a, double b);

/// Smallest Gauss-Legendre point count exact for the given polynomial degree.
inline int gauss_points_for_degree(int degree) { return degree / 2 + 1; }

struct QuadratureRule {
  std::vector<Eigen::Vector2d> nodes;
  Eigen::VectorXd weights;

  double total_weight() const { return weights.size() ? weights.sum() : 0.0; }
  int size() const { return static_cast<int>(nodes.size()); }
};

/// Rule on the triangle (a, b, c), exact for bivariate polynomials of total
/// degree <= order. Weights are positive and sum to the triangle area.
QuadratureRule triangle_quadrature(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                   const Eigen::Vector2d& c, int order);

}  // namespace vemdg
