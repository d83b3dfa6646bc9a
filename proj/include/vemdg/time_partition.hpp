#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace vemdg {

/// Partition of (0, T] into slabs I_n = (t_{n-1}, t_n] with per-slab degrees.
/// r = 1 is admitted but lies outside the convergence theory (reported, never
/// silently promoted).
struct TimePartition {
  Eigen::VectorXd breaks;    // size n+1, breaks[0] = 0
  std::vector<int> degrees;  // r_n >= 1

  int n_slabs() const { return static_cast<int>(degrees.size()); }
  double start(int n) const { return breaks[n]; }
  double end(int n) const { return breaks[n + 1]; }
  double tau(int n) const { return breaks[n + 1] - breaks[n]; }
  double total_time() const { return breaks[n_slabs()]; }
  bool has_degree_one() const {
    for (int r : degrees)
      if (r < 2) return true;
    return false;
  }
  bool uniform() const {
    for (int n = 1; n < n_slabs(); ++n)
      if (degrees[n] != degrees[0] || std::abs(tau(n) - tau(0)) > 1e-14 * total_time())
        return false;
    return true;
  }

  /// Slab index owning t under the left-limit convention: t in (t_{n-1}, t_n];
  /// t = 0 belongs to the first slab.
  int slab_of(double t) const {
    if (t <= breaks[0]) return 0;
    for (int n = 0; n < n_slabs(); ++n)
      if (t <= breaks[n + 1]) return n;
    return n_slabs() - 1;
  }

  void validate() const {
    if (n_slabs() < 1 || breaks.size() != n_slabs() + 1)
      throw std::invalid_argument("TimePartition: inconsistent sizes");
    double sum = 0.0;
    for (int n = 0; n < n_slabs(); ++n) {
      if (tau(n) <= 0.0) throw std::invalid_argument("TimePartition: non-positive slab length");
      if (degrees[n] < 1) throw std::invalid_argument("TimePartition: degree must be >= 1");
      sum += tau(n);
    }
    if (std::abs(sum - total_time()) > 1e-12 * std::max(total_time(), 1.0))
      throw std::invalid_argument("TimePartition: slab lengths do not sum to T");
  }

  static TimePartition uniform_partition(double T, int n_slabs, int r) {
    if (T <= 0 || n_slabs < 1) throw std::invalid_argument("TimePartition: need T > 0, slabs >= 1");
    TimePartition p;
    p.breaks.setLinSpaced(n_slabs + 1, 0.0, T);
    p.breaks[0] = 0.0;
    p.breaks[n_slabs] = T;
    p.degrees.assign(n_slabs, r);
    p.validate();
    return p;
  }
};

}  // namespace vemdg
