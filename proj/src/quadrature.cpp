#include "vemdg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace vemdg {

void legendre_all(int n, double x, Eigen::VectorXd* values, Eigen::VectorXd* first,
                  Eigen::VectorXd* second) {
  Eigen::VectorXd p(n + 1), d1(n + 1), d2(n + 1);
  p[0] = 1.0;
  d1[0] = 0.0;
  d2[0] = 0.0;
  if (n >= 1) {
    p[1] = x;
    d1[1] = 1.0;
    d2[1] = 0.0;
  }
  for (int j = 2; j <= n; ++j) {
    const double a = (2.0 * j - 1.0) / j;
    const double b = (j - 1.0) / j;
    p[j] = a * x * p[j - 1] - b * p[j - 2];
    // P'_j = (2j-1) P_{j-1} + P'_{j-2}, and once more for the second derivative
    d1[j] = (2.0 * j - 1.0) * p[j - 1] + d1[j - 2];
    d2[j] = (2.0 * j - 1.0) * d1[j - 1] + d2[j - 2];
  }
  if (values) *values = p;
  if (first) *first = d1;
  if (second) *second = d2;
}

Rule1d gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  Rule1d rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n / 2 + n % 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    Eigen::VectorXd p, d1;
    for (int it = 0; it < 100; ++it) {
      legendre_all(n, x, &p, &d1, nullptr);
      const double dx = p[n] / d1[n];
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre_all(n, x, &p, &d1, nullptr);
    const double w = 2.0 / ((1.0 - x * x) * d1[n] * d1[n]);
    rule.nodes[i] = -x;  // ascending order
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

Rule1d gauss_lobatto(int n) {
  if (n < 2) throw std::invalid_argument("gauss_lobatto: need n >= 2 points");
  Rule1d rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = n - 1;  // interior nodes are roots of P'_m
  rule.nodes[0] = -1.0;
  rule.nodes[n - 1] = 1.0;
  const double wend = 2.0 / (m * (m + 1.0));
  rule.weights[0] = wend;
  rule.weights[n - 1] = wend;
  for (int i = 1; i <= n - 2; ++i) {
    // Chebyshev-like initial guess, refined by Newton on P'_m
    double x = std::cos(M_PI * i / m);
    Eigen::VectorXd p, d1, d2;
    for (int it = 0; it < 100; ++it) {
      legendre_all(m, x, &p, &d1, &d2);
      const double dx = d1[m] / d2[m];
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre_all(m, x, &p, &d1, nullptr);
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / (m * (m + 1.0) * p[m] * p[m]);
  }
  return rule;
}

Rule1d map_to_interval(const Rule1d& rule, double a, double b) {
  Rule1d out;
  out.nodes = (0.5 * (b - a) * rule.nodes.array() + 0.5 * (a + b)).matrix();
  out.weights = 0.5 * (b - a) * rule.weights;
  return out;
}

QuadratureRule triangle_quadrature(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                   const Eigen::Vector2d& c, int order) {
  if (order < 0) order = 0;
  // Collapsed tensor-product rule: map (u,v) in [0,1]^2 to the reference
  // triangle via x = u(1-v), y = uv (Jacobian u), then affinely to (a,b,c).
  // Degree p in (x,y) becomes degree p+1 in u and p in v.
  const int nu = gauss_points_for_degree(order + 1);
  const int nv = gauss_points_for_degree(order);
  const Rule1d ru = map_to_interval(gauss_legendre(nu), 0.0, 1.0);
  const Rule1d rv = map_to_interval(gauss_legendre(nv), 0.0, 1.0);

  const Eigen::Vector2d e1 = b - a;
  const Eigen::Vector2d e2 = c - a;
  const double jac = e1.x() * e2.y() - e1.y() * e2.x();  // 2*area, signed

  QuadratureRule rule;
  rule.nodes.reserve(nu * nv);
  rule.weights.resize(nu * nv);
  int q = 0;
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      const double u = ru.nodes[i];
      const double v = rv.nodes[j];
      const double x = u * (1.0 - v);
      const double y = u * v;
      rule.nodes.push_back(a + x * e1 + y * e2);
      rule.weights[q++] = ru.weights[i] * rv.weights[j] * u * jac;
    }
  }
  return rule;
}

}  // namespace vemdg
