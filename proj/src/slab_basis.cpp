#include "vemdg/slab_basis.hpp"

#include <stdexcept>

#include "vemdg/quadrature.hpp"

namespace vemdg {

namespace {
// Legendre values/derivatives at the reference coordinate s = 2(t-mid)/tau,
// with the chain-rule factor per derivative order.
Eigen::VectorXd eval(const SlabBasis& basis, double t, int order) {
  const double s = (2.0 * t - basis.t0 - basis.t1) / basis.tau();
  Eigen::VectorXd p, d1, d2;
  legendre_all(basis.degree, s, &p, order >= 1 ? &d1 : nullptr, order >= 2 ? &d2 : nullptr);
  const Eigen::VectorXd& ref = order == 0 ? p : (order == 1 ? d1 : d2);
  double chain = 1.0;
  for (int i = 0; i < order; ++i) chain *= 2.0 / basis.tau();
  return chain * (ref.transpose() * basis.coeffs).transpose();
}
}  // namespace

Eigen::VectorXd SlabBasis::values(double t) const { return eval(*this, t, 0); }
Eigen::VectorXd SlabBasis::derivatives(double t) const { return eval(*this, t, 1); }
Eigen::VectorXd SlabBasis::second_derivatives(double t) const { return eval(*this, t, 2); }

SlabBasis SlabBasis::make(double t0, double t1, int degree, TimeBasisType type) {
  if (degree < 1) throw std::invalid_argument("SlabBasis: degree must be >= 1");
  if (t1 <= t0) throw std::invalid_argument("SlabBasis: empty slab");
  SlabBasis basis;
  basis.t0 = t0;
  basis.t1 = t1;
  basis.degree = degree;
  basis.type = type;
  const int n = degree + 1;
  if (type == TimeBasisType::legendre) {
    basis.coeffs = Eigen::MatrixXd::Identity(n, n);
  } else {
    // nodal at Gauss-Lobatto points: invert the Legendre Vandermonde there
    const Rule1d gl = gauss_lobatto(n);
    Eigen::MatrixXd vander(n, n);
    for (int q = 0; q < n; ++q) {
      Eigen::VectorXd p;
      legendre_all(degree, gl.nodes[q], &p, nullptr, nullptr);
      vander.row(q) = p.transpose();
    }
    basis.coeffs = vander.partialPivLu().solve(Eigen::MatrixXd::Identity(n, n));
  }
  return basis;
}

}  // namespace vemdg
