#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace clusterkit {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)).
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kLogZero) return a;
  return a + std::log1p(std::exp(b - a));
}

// log(sum exp(v_i)); returns kLogZero for an empty span or all-zero terms.
double log_sum_exp(std::span<const double> v);

// Streaming log-sum-exp accumulator: keeps a running maximum and a scaled
// linear sum so adding a term costs one exp in the common case.
class LogAccumulator {
 public:
  void add(double log_term) {
    if (log_term == kLogZero) return;
    if (log_term <= max_) {
      sum_ += std::exp(log_term - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }

  double value() const {
    if (max_ == kLogZero) return kLogZero;
    return max_ + std::log(sum_);
  }

  double max_term() const { return max_; }

 private:
  double max_ = kLogZero;
  double sum_ = 0.0;
};

// log of the generalized binomial (c + m - 1 choose m) for real c > 0 given
// only log c, so that c itself may exceed the double range.
double log_rising_binomial(double log_c, long m);

}  // namespace clusterkit
