#pragma once

#include <Eigen/Dense>

#include <array>

namespace vemdg {

/// Scaled monomials m_a(x) = ((x - center)/h)^a, |a| <= degree, in
/// degree-lexicographic order: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
struct ScaledMonomialBasis {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double h = 1.0;
  int degree = 0;

  static int dimension(int k) { return k < 0 ? 0 : (k + 1) * (k + 2) / 2; }
  int size() const { return dimension(degree); }

  static std::array<int, 2> exponent(int idx) {
    int d = 0;
    while (dimension(d) <= idx) ++d;
    const int offset = idx - dimension(d - 1);
    return {d - offset, offset};
  }
  static int index(int ax, int ay) { return dimension(ax + ay - 1) + ay; }

  Eigen::VectorXd values(const Eigen::Vector2d& x) const {
    const double sx = (x.x() - center.x()) / h;
    const double sy = (x.y() - center.y()) / h;
    Eigen::VectorXd px(degree + 1), py(degree + 1);
    px[0] = py[0] = 1.0;
    for (int i = 1; i <= degree; ++i) {
      px[i] = px[i - 1] * sx;
      py[i] = py[i - 1] * sy;
    }
    Eigen::VectorXd out(size());
    for (int i = 0; i < size(); ++i) {
      const auto a = exponent(i);
      out[i] = px[a[0]] * py[a[1]];
    }
    return out;
  }

  /// Gradients of all basis monomials at x; row i = grad m_i.
  Eigen::Matrix<double, Eigen::Dynamic, 2> gradients(const Eigen::Vector2d& x) const {
    const double sx = (x.x() - center.x()) / h;
    const double sy = (x.y() - center.y()) / h;
    Eigen::VectorXd px(degree + 1), py(degree + 1);
    px[0] = py[0] = 1.0;
    for (int i = 1; i <= degree; ++i) {
      px[i] = px[i - 1] * sx;
      py[i] = py[i - 1] * sy;
    }
    Eigen::Matrix<double, Eigen::Dynamic, 2> out(size(), 2);
    for (int i = 0; i < size(); ++i) {
      const auto a = exponent(i);
      out(i, 0) = a[0] > 0 ? a[0] * px[a[0] - 1] * py[a[1]] / h : 0.0;
      out(i, 1) = a[1] > 0 ? a[1] * px[a[0]] * py[a[1] - 1] / h : 0.0;
    }
    return out;
  }

  /// Coefficient map of the Laplacian: row space is the degree-(k-2) basis,
  /// so (laplacian_map() * c) are the coefficients of  Delta sum_i c_i m_i.
  Eigen::MatrixXd laplacian_map() const {
    Eigen::MatrixXd map = Eigen::MatrixXd::Zero(dimension(degree - 2), size());
    for (int i = 0; i < size(); ++i) {
      const auto a = exponent(i);
      if (a[0] >= 2) map(index(a[0] - 2, a[1]), i) += a[0] * (a[0] - 1) / (h * h);
      if (a[1] >= 2) map(index(a[0], a[1] - 2), i) += a[1] * (a[1] - 1) / (h * h);
    }
    return map;
  }
};

}  // namespace vemdg
