#pragma once

#include <functional>
#include <vector>

#include "vemdg/geometry.hpp"
#include "vemdg/vem_space.hpp"

namespace vemdg {

/// One separable load contribution X(x) g(t). All paper loads are of this
/// form, which lets the spatial projection be assembled once per solve.
struct SeparableLoadTerm {
  ScalarField spatial;
  std::function<double(double)> temporal;
};

struct LoadFunction {
  std::vector<SeparableLoadTerm> terms;
  std::function<double(const Eigen::Vector2d&, double)> general;  // optional extra

  bool empty() const { return terms.empty() && !general; }
};

/// u_tt + nu u_t - Laplace(u) = f on box x (0, T], u = 0 on the boundary.
/// nu = 0 is admitted (outside the dissipative theory, used by the validation
/// scenario).
struct WaveProblem {
  BoundingBox box;
  double nu = 0.0;
  double final_time = 1.0;
  ScalarField initial_value;     // u0, null = zero
  ScalarField initial_velocity;  // z0, null = zero
  LoadFunction load;

  void validate() const {
    if (final_time <= 0.0) throw std::invalid_argument("WaveProblem: T must be positive");
    if (nu < 0.0) throw std::invalid_argument("WaveProblem: nu must be nonnegative");
  }
};

/// Caches the spatially projected load vectors so that F(t) evaluations reuse
/// the per-term projections (the general part is projected per call).
class ProjectedLoad {
 public:
  ProjectedLoad(const VemSpace& space, LoadFunction load)
      : space_(&space), load_(std::move(load)) {
    for (const auto& term : load_.terms)
      spatial_.push_back(project_load(space, term.spatial));
  }

  int dim() const { return space_->n_interior; }

  Eigen::VectorXd at(double t) const {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(dim());
    for (std::size_t i = 0; i < spatial_.size(); ++i)
      f += load_.terms[i].temporal(t) * spatial_[i];
    if (load_.general)
      f += project_load(*space_, [&](const Eigen::Vector2d& x) { return load_.general(x, t); });
    return f;
  }

  bool empty() const { return load_.empty(); }

 private:
  const VemSpace* space_;
  LoadFunction load_;
  std::vector<Eigen::VectorXd> spatial_;
};

}  // namespace vemdg
