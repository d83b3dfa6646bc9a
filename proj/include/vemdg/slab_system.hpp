#pragma once

#include <memory>
#include <optional>

#include "vemdg/linalg.hpp"
#include "vemdg/problem.hpp"
#include "vemdg/slab_basis.hpp"
#include "vemdg/solution.hpp"
#include "vemdg/time_partition.hpp"
#include "vemdg/vem_space.hpp"

namespace vemdg {

/// Temporal matrices of the per-slab system (paper ordering: row = test index
/// l, column = trial index m):
///   n1 = (psidd_m, psid_l),  n2 = (psid_m, psid_l),  n3 = (psi_m, psid_l),
///   n4/n5 = outer products of the start-point derivative/value rows,
///   n6/n7 couple the previous slab's end traces to the current start traces
///   (upwind: column index runs over the previous basis). Empty when there is
///   no previous slab (the initial data enters the right-hand side directly).
struct TemporalMatrices {
  Eigen::MatrixXd n1, n2, n3, n4, n5;
  Eigen::MatrixXd n6, n7;
};

TemporalMatrices temporal_matrices(const SlabBasis& basis, const SlabBasis* prev = nullptr);

/// Incoming interface data for one slab: the previous slab's end traces, or
/// the initial data (U0, Z0) for the first slab.
struct SlabState {
  Eigen::VectorXd value;
  Eigen::VectorXd derivative;
};

struct SlabSystem {
  KroneckerOperator op;  // A^n = M (x) (n1 + nu n2 + n4) + A (x) (n3 + n5)
  Eigen::VectorXd rhs;   // F^n
};

SlabSystem build_slab_system(const VemSpace& space, const SlabBasis& basis, double nu,
                             const ProjectedLoad& load, const SlabState& incoming,
                             int load_quadrature_order);

enum class SlabSolverKind { automatic, dense, sparse_lu, kron_diag };

/// Factorization of one slab operator, reusable across slabs with identical
/// (tau, r). The dense path is the contract baseline; the kron path
/// diagonalizes the temporal pencil into r+1 complex-shifted spatial solves.
class SlabSolver {
 public:
  virtual ~SlabSolver() = default;
  virtual Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const = 0;
  virtual const char* name() const = 0;
};

std::unique_ptr<SlabSolver> make_slab_solver(const KroneckerOperator& op, SlabSolverKind kind);

struct MarchOptions {
  SlabSolverKind solver = SlabSolverKind::automatic;
  TimeBasisType basis = TimeBasisType::lagrange_lobatto;
  int load_quadrature_order = -1;  // default 2r+2
  double residual_tol = 1e-9;
  bool verbose = false;
};

/// Marches the DG scheme slab by slab. U0/Z0 are interior-DOF vectors.
SpaceTimeSolution march(std::shared_ptr<const VemSpace> space, const TimePartition& partition,
                        double nu, const LoadFunction& load, const Eigen::VectorXd& U0,
                        const Eigen::VectorXd& Z0, const MarchOptions& options = {});

}  // namespace vemdg
