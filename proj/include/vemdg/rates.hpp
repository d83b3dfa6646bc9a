#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

namespace vemdg {

struct RateFit {
  std::vector<std::pair<double, double>> points;  // (h or dt, error)
  double slope = 0.0;                             // log-log least squares
  std::vector<double> interval_slopes;            // consecutive-pair slopes
};

/// Log-log least-squares fit over >= 3 (parameter, error) pairs with strictly
/// decreasing parameters and positive errors.
RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs);

}  // namespace vemdg
