#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "clusterkit/weights.hpp"

namespace clusterkit {

enum class Model { kSet, kMultiset };

// Truncated power series with non-negative coefficients, stored as natural
// logarithms (kLogZero marks an exact zero). Coefficients for exponents
// 0..order().
class LogSeries {
 public:
  LogSeries() : log_coeffs_(1, 0.0) {}
  explicit LogSeries(std::vector<double> log_coeffs);

  // Throws kContractViolation on a negative or non-finite value.
  static LogSeries from_values(std::span<const double> values);
  static LogSeries zero(std::int64_t order);
  static LogSeries one(std::int64_t order);

  std::int64_t order() const {
    return static_cast<std::int64_t>(log_coeffs_.size()) - 1;
  }
  double log_coeff(std::int64_t n) const;
  double value(std::int64_t n) const;
  std::span<const double> log_coeffs() const { return log_coeffs_; }

  LogSeries truncated(std::int64_t order) const;

 private:
  std::vector<double> log_coeffs_;
};

struct LogCoeff {
  double log_value;
  bool positive;  // false iff the coefficient is exactly zero
};

// [x^n] of a stored series.
LogCoeff coeff(const LogSeries& s, std::int64_t n);

// C(x) = sum_{k=1}^K c_k x^k.
LogSeries truncate_C(const WeightSequence& w, std::int64_t K);

// B = e^A via n B_n = sum_k k A_k B_{n-k}, each inner sum by log-sum-exp.
LogSeries series_exp(const LogSeries& a);

// Formal logarithm of a series with B_0 = 1. The recurrence subtracts, so a
// result with a genuinely negative coefficient is a contract violation.
// Relative accuracy of A_n is about eps * B_n / A_n.
LogSeries series_log(const LogSeries& b);

// Product truncated to min(a.order(), b.order()).
LogSeries multiply(const LogSeries& a, const LogSeries& b);

// Euler transform exponent sum_{j>=1} C(x^j)/j restricted to cluster sizes
// in [min_size, max_size].
LogSeries euler_exponent(const WeightSequence& w, std::int64_t K,
                         std::int64_t min_size = 1,
                         std::int64_t max_size = INT64_MAX);

// G = exp{sum_j C(x^j)/j} to order K.
LogSeries euler_transform(const WeightSequence& w, std::int64_t K);

struct SizeRestriction {
  enum class Kind { kMaxSizeAtMost, kMinSizeGreater };
  Kind kind;
  std::int64_t s;

  static SizeRestriction at_most(std::int64_t s) {
    return {Kind::kMaxSizeAtMost, s};
  }
  static SizeRestriction greater_than(std::int64_t s) {
    return {Kind::kMinSizeGreater, s};
  }
};

// Generating series of (multi)sets built only from clusters whose size lies
// in the allowed window.
LogSeries restricted_series(const WeightSequence& w, std::int64_t K,
                            Model model, SizeRestriction restriction);

// ln [x^n y^N] S(x,y) for N = 0..N_max, with S(x,y) = exp{y C(x)}. Iterated
// convolution D_N = D_{N-1} * C / N in log-space.
std::vector<double> bivariate_set_coeffs(const WeightSequence& w,
                                         std::int64_t n, std::int64_t N_max);

// ln [x^n y^N] G(x,y) for N = 0..N_max, G(x,y) = exp{sum_j y^j C(x^j)/j}.
std::vector<double> bivariate_multiset_coeffs(const WeightSequence& w,
                                              std::int64_t n,
                                              std::int64_t N_max);

// A point of Omega_n: counts[k-1] = N_k, sum k N_k = n.
class ClusterStructure {
 public:
  ClusterStructure() = default;
  // Throws kContractViolation unless sum k N_k == n.
  ClusterStructure(std::int64_t n, std::vector<std::int64_t> counts);

  std::int64_t n() const { return n_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  std::int64_t count(std::int64_t k) const {
    return k >= 1 && k <= static_cast<std::int64_t>(counts_.size())
               ? counts_[static_cast<std::size_t>(k - 1)]
               : 0;
  }

  friend bool operator==(const ClusterStructure&,
                         const ClusterStructure&) = default;

 private:
  std::int64_t n_ = 0;
  std::vector<std::int64_t> counts_;
};

// Visits every element of Omega_n in reverse lexicographic order of the
// underlying integer partitions (n, then n-1+1, ...).
void for_each_cluster_structure(
    std::int64_t n, const std::function<void(const ClusterStructure&)>& fn);

// ln of prod c_i^{N_i}/N_i! (sets) or prod binom(c_i+N_i-1, N_i) (multisets).
double structure_log_weight(const WeightSequence& w, const ClusterStructure& cs,
                            Model model);

inline constexpr std::int64_t kBruteForceLimit = 30;

struct PartitionFunction {
  double log_value;
  double value;
};

// Sums the structure weights over all of Omega_n (n <= 30). For sets this is
// [x^n]S, i.e. the partition function divided by n!.
PartitionFunction brute_force_omega_sum(const WeightSequence& w,
                                        std::int64_t n, Model model);

enum class Statistic { kKappa, kLargest, kSmallest };

// Exact law of one statistic of the random structure of size n.
//   kappa:    values[N]  = P(kappa = N),  N = 0..n
//   largest:  values[s]  = P(L <= s),     s = 0..n
//   smallest: values[s]  = P(M > s),      s = 0..n
struct ProbabilityTable {
  Statistic statistic;
  Model model;
  std::int64_t n;
  std::vector<double> values;
  std::vector<double> log_values;
};

ProbabilityTable exact_distribution(const WeightSequence& w, std::int64_t n,
                                    Statistic statistic, Model model);

// Row-by-row table of ln [x^m] F_{<=s}(x), m = 0..n, for s = 0..n: the
// partition function restricted to clusters of size at most s. Built by
// multiplying in one cluster size at a time.
class MaxSizeTable {
 public:
  MaxSizeTable(const WeightSequence& w, std::int64_t n, Model model);

  std::int64_t n() const { return n_; }
  Model model() const { return model_; }
  double log_entry(std::int64_t s, std::int64_t m) const {
    return table_[static_cast<std::size_t>(s * (n_ + 1) + m)];
  }
  // ln of the weight of exactly j clusters of size s.
  std::span<const double> log_factor(std::int64_t s) const {
    return factors_[static_cast<std::size_t>(s)];
  }

 private:
  std::int64_t n_;
  Model model_;
  std::vector<double> table_;
  std::vector<std::vector<double>> factors_;
};

// ln of the weight of j clusters of size s, j = 0..j_max.
std::vector<double> cluster_factor(const WeightSequence& w, std::int64_t s,
                                   std::int64_t j_max, Model model);

}  // namespace clusterkit
