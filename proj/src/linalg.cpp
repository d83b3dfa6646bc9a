#include "vemdg/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cstdio>
#include <fstream>

namespace vemdg {

SparseMatrixd assemble_sparse_symmetric(int n, const std::vector<Tripletd>& triplets, double tol) {
  for (const auto& t : triplets)
    if (t.row() < 0 || t.row() >= n || t.col() < 0 || t.col() >= n)
      throw LinalgError("assemble_sparse_symmetric: triplet index out of range");
  SparseMatrixd m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());  // duplicates summed
  m.prune([](int, int, double v) { return v != 0.0; });

  double max_abs = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrixd::InnerIterator it(m, k); it; ++it)
      max_abs = std::max(max_abs, std::abs(it.value()));

  SparseMatrixd diff = SparseMatrixd(m.transpose()) - m;
  double worst = 0.0;
  int wi = -1, wj = -1;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrixd::InnerIterator it(diff, k); it; ++it)
      if (std::abs(it.value()) > worst) {
        worst = std::abs(it.value());
        wi = static_cast<int>(it.row());
        wj = static_cast<int>(it.col());
      }
  if (worst > tol * std::max(max_abs, 1e-300))
    throw LinalgError("assemble_sparse_symmetric: asymmetry " + std::to_string(worst) +
                      " at entry (" + std::to_string(wi) + "," + std::to_string(wj) + ")");
  // enforce exact symmetry so downstream quadratic forms are clean
  SparseMatrixd sym = 0.5 * (m + SparseMatrixd(m.transpose()));
  sym.prune([](int, int, double v) { return v != 0.0; });
  return sym;
}

Eigen::VectorXd solve_dense(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (A.rows() != A.cols() || A.rows() != b.size())
    throw LinalgError("solve_dense: dimension mismatch");
  if (A.rows() == 0) return Eigen::VectorXd();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  Eigen::VectorXd x = lu.solve(b);
  const double res = (A * x - b).norm();
  const double scale = A.norm() * x.norm() + b.norm();
  if (!x.allFinite() || res > 1e-10 * std::max(scale, 1e-300))
    throw LinalgError("solve_dense: matrix singular to working precision (residual " +
                      std::to_string(res) + ")");
  return x;
}

void KroneckerOperator::check_dimensions() const {
  for (const auto& t : terms) {
    if (t.spatial->rows() != t.spatial->cols() || t.temporal.rows() != t.temporal.cols())
      throw LinalgError("KroneckerOperator: factors must be square");
    if (t.spatial->rows() != spatial_dim() || t.temporal.rows() != temporal_dim())
      throw LinalgError("KroneckerOperator: inconsistent factor dimensions");
  }
}

Eigen::VectorXd KroneckerOperator::apply(const Eigen::VectorXd& x) const {
  check_dimensions();
  const int ns = spatial_dim();
  const int nt = temporal_dim();
  if (x.size() != static_cast<Eigen::Index>(ns) * nt)
    throw LinalgError("KroneckerOperator::apply: dimension mismatch");
  using RowMajorMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajorMat> X(x.data(), ns, nt);
  RowMajorMat Y = RowMajorMat::Zero(ns, nt);
  for (const auto& t : terms) Y += *t.spatial * (X * t.temporal.transpose());
  return Eigen::Map<const Eigen::VectorXd>(Y.data(), x.size());
}

Eigen::MatrixXd KroneckerOperator::materialize() const {
  check_dimensions();
  const int ns = spatial_dim();
  const int nt = temporal_dim();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ns) * nt,
                                              static_cast<Eigen::Index>(ns) * nt);
  for (const auto& t : terms)
    for (int k = 0; k < t.spatial->outerSize(); ++k)
      for (SparseMatrixd::InnerIterator it(*t.spatial, k); it; ++it)
        out.block(it.row() * nt, it.col() * nt, nt, nt) += it.value() * t.temporal;
  return out;
}

SparseMatrixd KroneckerOperator::materialize_sparse() const {
  check_dimensions();
  const int ns = spatial_dim();
  const int nt = temporal_dim();
  // union of the spatial patterns, with per-column counts for exact reservation
  SparseMatrixd pattern(ns, ns);
  {
    std::vector<Tripletd> trips;
    for (const auto& t : terms)
      for (int k = 0; k < t.spatial->outerSize(); ++k)
        for (SparseMatrixd::InnerIterator it(*t.spatial, k); it; ++it)
          trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), 1.0);
    pattern.setFromTriplets(trips.begin(), trips.end());
  }

  SparseMatrixd out(static_cast<Eigen::Index>(ns) * nt, static_cast<Eigen::Index>(ns) * nt);
  Eigen::VectorXi reserve(out.cols());
  for (int j = 0; j < ns; ++j) {
    const int col_nnz = pattern.outerIndexPtr()[j + 1] - pattern.outerIndexPtr()[j];
    for (int m = 0; m < nt; ++m) reserve[static_cast<Eigen::Index>(j) * nt + m] = col_nnz * nt;
  }
  out.reserve(reserve);
  for (int j = 0; j < ns; ++j) {
    std::vector<std::pair<int, Eigen::MatrixXd>> blocks;
    for (SparseMatrixd::InnerIterator pit(pattern, j); pit; ++pit)
      blocks.emplace_back(static_cast<int>(pit.row()), Eigen::MatrixXd::Zero(nt, nt));
    for (const auto& t : terms) {
      std::size_t b = 0;
      for (SparseMatrixd::InnerIterator it(*t.spatial, j); it; ++it) {
        while (blocks[b].first != it.row()) ++b;
        blocks[b].second += it.value() * t.temporal;
      }
    }
    for (int m = 0; m < nt; ++m)
      for (const auto& [i, block] : blocks)
        for (int l = 0; l < nt; ++l)
          out.insert(static_cast<Eigen::Index>(i) * nt + l,
                     static_cast<Eigen::Index>(j) * nt + m) = block(l, m);
  }
  out.makeCompressed();
  return out;
}

double KroneckerOperator::norm_estimate() const {
  double s = 0.0;
  for (const auto& t : terms) {
    double spatial_max = 0.0;
    for (int k = 0; k < t.spatial->outerSize(); ++k) {
      double row_sum = 0.0;
      for (SparseMatrixd::InnerIterator it(*t.spatial, k); it; ++it)
        row_sum += std::abs(it.value());
      spatial_max = std::max(spatial_max, row_sum);
    }
    s += spatial_max * t.temporal.cwiseAbs().rowwise().sum().maxCoeff();
  }
  return s;
}

GeneralizedEig generalized_eigh(const SparseMatrixd& A, const SparseMatrixd& M) {
  if (A.rows() != A.cols() || M.rows() != M.cols() || A.rows() != M.rows())
    throw LinalgError("generalized_eigh: dimension mismatch");
  const Eigen::MatrixXd Ad(A);
  const Eigen::MatrixXd Md(M);
  Eigen::LLT<Eigen::MatrixXd> llt(Md);
  if (llt.info() != Eigen::Success)
    throw LinalgError("generalized_eigh: M is not symmetric positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  // B = L^{-1} A L^{-T}
  Eigen::MatrixXd B = L.triangularView<Eigen::Lower>().solve(Ad);
  B = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd(B.transpose())).transpose();
  B = 0.5 * (B + Eigen::MatrixXd(B.transpose()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
  if (es.info() != Eigen::Success) throw LinalgError("generalized_eigh: eigensolver failed");
  GeneralizedEig out;
  out.values = es.eigenvalues();
  out.vectors = L.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors());
  return out;
}

void write_matrix_market(const std::string& path, const SparseMatrixd& m) {
  std::ofstream out(path);
  if (!out) throw LinalgError("write_matrix_market: cannot open " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << " " << m.cols() << " " << m.nonZeros() << "\n";
  char buf[64];
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrixd::InnerIterator it(m, k); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%ld %ld %.17g\n", static_cast<long>(it.row() + 1),
                    static_cast<long>(it.col() + 1), it.value());
      out << buf;
    }
}

}  // namespace vemdg
