#include "vemdg/slab_system.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <complex>
#include <iostream>

namespace vemdg {

TemporalMatrices temporal_matrices(const SlabBasis& basis, const SlabBasis* prev) {
  const int n = basis.size();
  TemporalMatrices tm;
  tm.n1.setZero(n, n);
  tm.n2.setZero(n, n);
  tm.n3.setZero(n, n);

  const Rule1d rule = map_to_interval(gauss_legendre(n), basis.t0, basis.t1);
  for (int q = 0; q < rule.nodes.size(); ++q) {
    const double w = rule.weights[q];
    const Eigen::VectorXd v = basis.values(rule.nodes[q]);
    const Eigen::VectorXd d = basis.derivatives(rule.nodes[q]);
    const Eigen::VectorXd dd = basis.second_derivatives(rule.nodes[q]);
    tm.n1.noalias() += w * d * dd.transpose();
    tm.n2.noalias() += w * d * d.transpose();
    tm.n3.noalias() += w * d * v.transpose();
  }

  const Eigen::VectorXd v0 = basis.values(basis.t0);
  const Eigen::VectorXd d0 = basis.derivatives(basis.t0);
  tm.n4 = d0 * d0.transpose();
  tm.n5 = v0 * v0.transpose();
  if (prev) {
    const Eigen::VectorXd vp = prev->values(prev->t1);
    const Eigen::VectorXd dp = prev->derivatives(prev->t1);
    tm.n6 = d0 * dp.transpose();
    tm.n7 = v0 * vp.transpose();
  }
  return tm;
}

SlabSystem build_slab_system(const VemSpace& space, const SlabBasis& basis, double nu,
                             const ProjectedLoad& load, const SlabState& incoming,
                             int load_quadrature_order) {
  const int ns = space.n_interior;
  const int nt = basis.size();
  const TemporalMatrices tm = temporal_matrices(basis);

  SlabSystem sys;
  sys.op.terms.push_back({borrow(space.mass), tm.n1 + nu * tm.n2 + tm.n4});
  sys.op.terms.push_back({borrow(space.stiffness), tm.n3 + tm.n5});

  using RowMajorMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajorMat F = RowMajorMat::Zero(ns, nt);

  if (!load.empty()) {
    const int order = load_quadrature_order > 0 ? load_quadrature_order : 2 * basis.degree + 2;
    const Rule1d rule =
        map_to_interval(gauss_legendre(gauss_points_for_degree(order)), basis.t0, basis.t1);
    for (int q = 0; q < rule.nodes.size(); ++q) {
      // the load is tested against the time derivative of the test function,
      // like every other volume term of the scheme
      const Eigen::VectorXd fq = load.at(rule.nodes[q]);
      const Eigen::VectorXd psi_dot = basis.derivatives(rule.nodes[q]);
      F.noalias() += rule.weights[q] * fq * psi_dot.transpose();
    }
  }

  // upwind coupling (previous end traces; initial data for the first slab)
  const Eigen::VectorXd v0 = basis.values(basis.t0);
  const Eigen::VectorXd d0 = basis.derivatives(basis.t0);
  F.noalias() += (space.mass * incoming.derivative) * d0.transpose();
  F.noalias() += (space.stiffness * incoming.value) * v0.transpose();

  sys.rhs = Eigen::Map<const Eigen::VectorXd>(F.data(), static_cast<Eigen::Index>(ns) * nt);
  return sys;
}

namespace {

class DenseSlabSolver final : public SlabSolver {
 public:
  explicit DenseSlabSolver(const KroneckerOperator& op) : lu_(op.materialize()) {}
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const override { return lu_.solve(rhs); }
  const char* name() const override { return "dense"; }

 private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

class SparseSlabSolver final : public SlabSolver {
 public:
  explicit SparseSlabSolver(const KroneckerOperator& op) {
    matrix_ = op.materialize_sparse();
    lu_.compute(matrix_);
    if (lu_.info() != Eigen::Success)
      throw LinalgError("SparseSlabSolver: factorization failed");
  }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const override { return lu_.solve(rhs); }
  const char* name() const override { return "sparse_lu"; }

 private:
  SparseMatrixd matrix_;
  Eigen::SparseLU<SparseMatrixd> lu_;
};

// Diagonalizes the temporal pencil P Phi = Q Phi Lambda, turning
// M (x) P + A (x) Q into r+1 decoupled complex-shifted systems A + lambda M.
// Conjugate eigenvalue pairs share one factorization.
class KronDiagSolver final : public SlabSolver {
 public:
  using Complex = std::complex<double>;
  using SparseMatrixcd = Eigen::SparseMatrix<Complex>;

  explicit KronDiagSolver(const KroneckerOperator& op) {
    if (op.terms.size() != 2)
      throw LinalgError("KronDiagSolver: expected the two-term M/A structure");
    const Eigen::MatrixXd& P = op.terms[0].temporal;
    const Eigen::MatrixXd& Q = op.terms[1].temporal;
    mass_ = op.terms[0].spatial;
    stiffness_ = op.terms[1].spatial;

    Eigen::PartialPivLU<Eigen::MatrixXd> qlu(Q);
    const Eigen::MatrixXd R = qlu.solve(P);
    if (!R.allFinite()) throw LinalgError("KronDiagSolver: temporal factor Q is singular");
    q_inv_t_ = qlu.inverse().transpose();

    Eigen::EigenSolver<Eigen::MatrixXd> es(R);
    if (es.info() != Eigen::Success) throw LinalgError("KronDiagSolver: pencil eigensolver failed");
    lambda_ = es.eigenvalues();
    const Eigen::MatrixXcd phi = es.eigenvectors();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(phi, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.singularValues()(svd.singularValues().size() - 1) <
        1e-10 * svd.singularValues()(0))
      throw LinalgError("KronDiagSolver: temporal pencil is not safely diagonalizable");
    phi_t_ = phi.transpose();
    phi_inv_t_ = phi.inverse().transpose();

    const int nt = static_cast<int>(lambda_.size());
    factor_of_mode_.assign(nt, -1);
    conjugate_mode_.assign(nt, false);
    for (int l = 0; l < nt; ++l) {
      if (factor_of_mode_[l] >= 0) continue;
      factors_.push_back(std::make_unique<Eigen::SparseLU<SparseMatrixcd>>());
      SparseMatrixcd shifted =
          stiffness_->cast<Complex>() + lambda_[l] * mass_->cast<Complex>();
      factors_.back()->compute(shifted);
      if (factors_.back()->info() != Eigen::Success)
        throw LinalgError("KronDiagSolver: shifted factorization failed");
      factor_of_mode_[l] = static_cast<int>(factors_.size()) - 1;
      if (std::abs(lambda_[l].imag()) > 0.0) {
        for (int j = l + 1; j < nt; ++j)
          if (factor_of_mode_[j] < 0 &&
              std::abs(lambda_[j] - std::conj(lambda_[l])) <=
                  1e-12 * std::max(1.0, std::abs(lambda_[l]))) {
            factor_of_mode_[j] = factor_of_mode_[l];
            conjugate_mode_[j] = true;
            break;
          }
      }
    }
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const override {
    const int ns = static_cast<int>(mass_->rows());
    const int nt = static_cast<int>(lambda_.size());
    using RowMajorMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajorMat> B(rhs.data(), ns, nt);
    Eigen::MatrixXcd Y = (B * q_inv_t_).cast<Complex>() * phi_inv_t_;
    Eigen::MatrixXcd Z(ns, nt);
    for (int l = 0; l < nt; ++l) {
      const auto& factor = *factors_[factor_of_mode_[l]];
      if (conjugate_mode_[l])
        Z.col(l) = factor.solve(Y.col(l).conjugate()).conjugate();
      else
        Z.col(l) = factor.solve(Y.col(l));
    }
    const RowMajorMat X = (Z * phi_t_).real();
    return Eigen::Map<const Eigen::VectorXd>(X.data(), rhs.size());
  }

  const char* name() const override { return "kron_diag"; }

 private:
  std::shared_ptr<const SparseMatrixd> mass_, stiffness_;
  Eigen::MatrixXd q_inv_t_;
  Eigen::VectorXcd lambda_;
  Eigen::MatrixXcd phi_t_, phi_inv_t_;
  std::vector<std::unique_ptr<Eigen::SparseLU<SparseMatrixcd>>> factors_;
  std::vector<int> factor_of_mode_;
  std::vector<bool> conjugate_mode_;
};

}  // namespace

std::unique_ptr<SlabSolver> make_slab_solver(const KroneckerOperator& op, SlabSolverKind kind) {
  switch (kind) {
    case SlabSolverKind::dense:
      return std::make_unique<DenseSlabSolver>(op);
    case SlabSolverKind::sparse_lu:
      return std::make_unique<SparseSlabSolver>(op);
    case SlabSolverKind::kron_diag:
      return std::make_unique<KronDiagSolver>(op);
    case SlabSolverKind::automatic:
      break;
  }
  if (op.rows() <= 1200) return std::make_unique<DenseSlabSolver>(op);
  try {
    return std::make_unique<KronDiagSolver>(op);
  } catch (const LinalgError&) {
    return std::make_unique<SparseSlabSolver>(op);
  }
}

SpaceTimeSolution march(std::shared_ptr<const VemSpace> space, const TimePartition& partition,
                        double nu, const LoadFunction& load, const Eigen::VectorXd& U0,
                        const Eigen::VectorXd& Z0, const MarchOptions& options) {
  partition.validate();
  if (U0.size() != space->n_interior || Z0.size() != space->n_interior)
    throw LinalgError("march: initial data size does not match the interior DOF count");

  SpaceTimeSolution sol;
  sol.space = space;
  sol.trajectory.partition = partition;
  sol.initial_value = U0;
  sol.initial_derivative = Z0;

  const ProjectedLoad projected(*space, load);
  std::unique_ptr<SlabSolver> solver;
  double cached_tau = -1.0;
  int cached_degree = -1;

  SlabState incoming{U0, Z0};
  for (int n = 0; n < partition.n_slabs(); ++n) {
    const SlabBasis basis =
        SlabBasis::make(partition.start(n), partition.end(n), partition.degrees[n], options.basis);
    sol.trajectory.bases.push_back(basis);

    if (space->n_interior == 0) {
      sol.trajectory.coeffs.emplace_back(0, basis.size());
      continue;
    }

    SlabSystem sys =
        build_slab_system(*space, basis, nu, projected, incoming, options.load_quadrature_order);

    const bool reuse = solver && cached_degree == partition.degrees[n] &&
                       std::abs(cached_tau - partition.tau(n)) <= 1e-12 * partition.total_time();
    if (!reuse) {
      solver = make_slab_solver(sys.op, options.solver);
      cached_tau = partition.tau(n);
      cached_degree = partition.degrees[n];
    }

    Eigen::VectorXd x = solver->solve(sys.rhs);
    const double residual = (sys.op.apply(x) - sys.rhs).norm();
    const double scale =
        std::max({sys.rhs.norm(), sys.op.norm_estimate() * x.norm(), 1e-300});
    if (!x.allFinite() || residual > options.residual_tol * scale)
      throw LinalgError("march: slab " + std::to_string(n) + " system is singular or failed (" +
                        solver->name() + " residual " + std::to_string(residual / scale) + ")");
    if (options.verbose)
      std::clog << "slab " << n << " [" << solver->name() << "] relative residual "
                << residual / scale << "\n";

    using RowMajorMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajorMat> X(x.data(), space->n_interior, basis.size());
    sol.trajectory.coeffs.emplace_back(X);

    incoming.value = sol.trajectory.end_value(n);
    incoming.derivative = sol.trajectory.end_derivative(n);
  }
  return sol;
}

}  // namespace vemdg
