#include "clusterkit/logmath.hpp"

#include <algorithm>

namespace clusterkit {

double log_sum_exp(std::span<const double> v) {
  double m = kLogZero;
  for (double x : v) m = std::max(m, x);
  if (m == kLogZero) return kLogZero;
  if (std::isinf(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double log_rising_binomial(double log_c, long m) {
  // prod_{i=0}^{m-1} (c + i) / m!
  double acc = 0.0;
  for (long i = 0; i < m; ++i) {
    const double log_ci =
        i == 0 ? log_c : log_add(log_c, std::log(static_cast<double>(i)));
    acc += log_ci - std::log(static_cast<double>(i + 1));
  }
  return acc;
}

}  // namespace clusterkit
