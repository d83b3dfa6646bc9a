#pragma once

#include <Eigen/Dense>

namespace vemdg {

enum class TimeBasisType {
  lagrange_lobatto,  // nodal at the r+1 Gauss-Lobatto points of the slab
  legendre           // modal, scaled Legendre
};

/// Polynomial basis {psi_m} of P_r on one slab [t0, t1], with values and the
/// first two derivatives evaluable anywhere (endpoint traces included).
/// Internally every basis function is stored by its scaled-Legendre
/// coefficients, so both representations share one stable evaluation path.
struct SlabBasis {
  double t0 = 0.0, t1 = 1.0;
  int degree = 1;
  TimeBasisType type = TimeBasisType::lagrange_lobatto;
  Eigen::MatrixXd coeffs;  // column m = Legendre coefficients of psi_m

  int size() const { return degree + 1; }
  double tau() const { return t1 - t0; }

  Eigen::VectorXd values(double t) const;
  Eigen::VectorXd derivatives(double t) const;
  Eigen::VectorXd second_derivatives(double t) const;

  static SlabBasis make(double t0, double t1, int degree,
                        TimeBasisType type = TimeBasisType::lagrange_lobatto);
};

}  // namespace vemdg
