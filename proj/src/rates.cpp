#include "vemdg/rates.hpp"

#include <cmath>

namespace vemdg {

RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3)
    throw std::invalid_argument("fit_rate: need at least 3 (parameter, error) pairs");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].second <= 0.0) throw std::invalid_argument("fit_rate: non-positive error");
    if (pairs[i].first <= 0.0) throw std::invalid_argument("fit_rate: non-positive parameter");
    if (i > 0 && pairs[i].first >= pairs[i - 1].first)
      throw std::invalid_argument("fit_rate: parameters must decrease strictly");
  }

  RateFit fit;
  fit.points = pairs;
  const int n = static_cast<int>(pairs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [p, e] : pairs) {
    const double x = std::log(p);
    const double y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  for (int i = 0; i + 1 < n; ++i)
    fit.interval_slopes.push_back(std::log(pairs[i].second / pairs[i + 1].second) /
                                  std::log(pairs[i].first / pairs[i + 1].first));
  return fit;
}

}  // namespace vemdg
