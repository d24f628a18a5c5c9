#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace clusterkit {

// The slowly varying factor h of a power-law weight family. Two shapes are
// supported: a positive constant, and (ln k)^p, which is frozen at h(2) for
// arguments below 2 so that h(1) stays positive.
struct SlowlyVarying {
  enum class Kind { kConstant, kLogPower };

  Kind kind = Kind::kConstant;
  double constant = 1.0;  // used by kConstant
  double power = 0.0;     // used by kLogPower

  static SlowlyVarying constant_value(double c);
  static SlowlyVarying log_power(double p);

  // ln h(x) for real x >= 1.
  double log_at(double x) const;
  double at(double x) const;
};

// Cluster weights c_k, k >= 1. Either the power-law family
// c_k = h(k) k^(alpha-1) rho^(-k), or a finite explicit prefix (c_k = 0
// past the last listed value). Immutable once built.
class WeightSequence {
 public:
  enum class Kind { kPowerLaw, kExplicit };

  // make_power_weights
  static WeightSequence power_law(double alpha, double rho,
                                  SlowlyVarying h = SlowlyVarying{});

  // values[i] is c_{i+1}. `rho`, when given, is the radius the saddle
  // solvers treat as the end of the search interval; otherwise the radius is
  // infinite (C is a polynomial). `alpha` is the family exponent needed by
  // the prefactors of the cluster-count results and cannot be inferred from
  // a finite prefix.
  static WeightSequence explicit_values(std::vector<double> values,
                                        std::optional<double> rho = {},
                                        std::optional<double> alpha = {});

  // c_k = 1 for all k.
  static WeightSequence partitions() { return power_law(1.0, 1.0); }

  Kind kind() const { return kind_; }

  // c_k and ln c_k (kLogZero when c_k == 0). k >= 1.
  double at(std::int64_t k) const;
  double log_at(std::int64_t k) const;

  // First index with c_k > 0.
  std::int64_t first_positive() const { return first_positive_; }

  // Radius of convergence of C; +inf for explicit weights without a rho.
  double rho() const { return rho_; }
  double log_rho() const { return log_rho_; }
  bool finite_radius() const { return rho_ < kUnbounded; }

  // Largest index with c_k > 0, or nullopt when the support is infinite.
  std::optional<std::int64_t> support_end() const;

  // Family exponent alpha if known (always for power-law weights).
  std::optional<double> alpha() const { return alpha_; }
  double require_alpha() const;

  // Power-law only.
  const SlowlyVarying& h() const { return h_; }
  bool symbolic_h() const { return kind_ == Kind::kPowerLaw; }

  const std::vector<double>& explicit_list() const { return values_; }

  static constexpr double kUnbounded = 1e300;

 private:
  WeightSequence() = default;

  Kind kind_ = Kind::kPowerLaw;
  std::optional<double> alpha_;
  double rho_ = 1.0;
  double log_rho_ = 0.0;
  SlowlyVarying h_;
  std::vector<double> values_;
  std::vector<double> log_values_;
  std::int64_t first_positive_ = 1;
};

struct OscillationCheck {
  std::int64_t k = 0;
  double lower = 0.0;
  double value = 0.0;
  double upper = 0.0;
  bool pass = false;
};

struct OscillationReport {
  std::vector<OscillationCheck> checks;
  bool all_pass = true;
  std::optional<std::int64_t> first_failure;
};

// Checks A1 k^(alpha1-1) rho^-k <= c_k <= A2 k^(alpha2-1) rho^-k for
// k in [k_min, k_max]. Comparisons are done on logarithms. Requires
// 0 < alpha1 <= alpha2 and 0 < A1 <= A2; equality gives the degenerate
// sandwich that pins an exact power law.
OscillationReport verify_oscillating_bounds(const WeightSequence& w,
                                            double alpha1, double alpha2,
                                            double A1, double A2,
                                            std::int64_t k_min,
                                            std::int64_t k_max);

WeightSequence weights_from_json(const nlohmann::json& j);
nlohmann::json weights_to_json(const WeightSequence& w);

}  // namespace clusterkit
