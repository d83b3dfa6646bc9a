#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace vemdg {

using SparseMatrixd = Eigen::SparseMatrix<double>;
using Tripletd = Eigen::Triplet<double>;

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Duplicate-summed, zero-pruned sparse matrix; verifies numerical symmetry
/// within tol (relative to the largest entry) and reports the worst violation.
SparseMatrixd assemble_sparse_symmetric(int n, const std::vector<Tripletd>& triplets,
                                        double tol = 1e-12);

/// Partial-pivoting LU solve with a backward-error contract:
/// ||Ax-b|| <= 1e-10 (||A|| ||x|| + ||b||). Throws LinalgError when the system
/// is singular to working precision.
Eigen::VectorXd solve_dense(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

struct KroneckerTerm {
  std::shared_ptr<const SparseMatrixd> spatial;
  Eigen::MatrixXd temporal;
};

/// Sum of Kronecker products  sum_i S_i (x) T_i  with the repo-wide ordering
/// contract: global index = spatial_index * (r+1) + temporal_index.
struct KroneckerOperator {
  std::vector<KroneckerTerm> terms;

  int spatial_dim() const { return terms.empty() ? 0 : static_cast<int>(terms[0].spatial->rows()); }
  int temporal_dim() const { return terms.empty() ? 0 : static_cast<int>(terms[0].temporal.rows()); }
  int rows() const { return spatial_dim() * temporal_dim(); }

  void check_dimensions() const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd materialize() const;
  SparseMatrixd materialize_sparse() const;
  /// Cheap upper bound for the operator norm, used in residual scaling.
  double norm_estimate() const;
};

/// Wraps a non-owning reference in the shared_ptr slot of a KroneckerTerm.
inline std::shared_ptr<const SparseMatrixd> borrow(const SparseMatrixd& m) {
  return std::shared_ptr<const SparseMatrixd>(std::shared_ptr<void>(), &m);
}

struct GeneralizedEig {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // M-orthonormal columns
};

/// Solves A w = lambda M w for symmetric A and SPD M by Cholesky reduction to
/// standard form. Dense; intended for small oracle-scale problems.
GeneralizedEig generalized_eigh(const SparseMatrixd& A, const SparseMatrixd& M);

/// MatrixMarket coordinate-format dump (debugging aid).
void write_matrix_market(const std::string& path, const SparseMatrixd& m);

}  // namespace vemdg
