#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "clusterkit/saddle.hpp"
#include "clusterkit/series.hpp"
#include "clusterkit/weights.hpp"

namespace clusterkit {

enum class EstimateSource {
  kEq9,
  kEq10,
  kEq11,
  kSn,
  kGn,
  kLemma1,
  kThm4,
  kThm3,
  kThm2,
  kCor1,
  kCor2,
  kEmLemma,
  kKaramata,
};

const char* to_string(EstimateSource source);

// A positive quantity carried by its logarithm, tagged with the formula that
// produced it.
struct AsymptoticEstimate {
  double log_value = 0.0;
  int sign = 1;
  EstimateSource source = EstimateSource::kEq9;
  std::optional<SaddlePoint> saddle;
  // Set when the second-derivative term vanishes identically (C'' == 0) and
  // the variance falls back to b(r).
  bool degenerate = false;

  double value() const;
};

nlohmann::json to_json(const AsymptoticEstimate& e);

// [x^n] e^C C^ell at the set saddle.
AsymptoticEstimate coeff_estimate_set(const WeightSequence& w, std::int64_t n,
                                      int ell);

// [x^n] G prod_i sum_j j^{p_i} C(x^j). rho < 1 uses the set saddle; rho = 1
// (and polynomial C) use the multiset saddle.
AsymptoticEstimate coeff_estimate_multiset(const WeightSequence& w,
                                           std::int64_t n,
                                           const std::vector<int>& p);

// s_n (including n!) for sets, g_n for multisets.
AsymptoticEstimate count_estimate(const WeightSequence& w, std::int64_t n,
                                  Model model);

// Hayman's coefficient formula at an arbitrary radius r, with the Gaussian
// factor exp(-(a-n)^2/(2b)) kept and the error term dropped.
AsymptoticEstimate hayman_coeff_general(const FunctionSpec& f,
                                        const WeightSequence& w,
                                        std::int64_t n, double r);

// [x^n y^N] S(x,y) at the ratio saddle.
AsymptoticEstimate bivariate_set_estimate(const WeightSequence& w,
                                          std::int64_t n, std::int64_t N);

struct LltPrediction {
  std::int64_t N = 0;
  double probability = 0.0;
  double mean = 0.0;      // C(z_n)
  double variance = 0.0;  // C(z_n)/(alpha+1)
  SaddlePoint saddle;
};

// Local limit prediction for kappa. Multisets are covered only for rho < 1.
LltPrediction llt_pmf_prediction(const WeightSequence& w, std::int64_t n,
                                 double t, Model model);

enum class GumbelModel { kSet, kMultisetRhoBelowOne, kMultisetRhoOne };

const char* to_string(GumbelModel model);
GumbelModel gumbel_model(const WeightSequence& w, Model model);

struct GumbelScaling {
  double beta_n = 0.0;
  double lnX = 0.0;
  GumbelModel model = GumbelModel::kSet;
  SaddlePoint saddle;

  double s_of_t(double t) const { return (lnX + t) / beta_n; }
  double t_of_s(double s) const { return beta_n * s - lnX; }
  // Predicted P(L <= s).
  double cdf(double s) const;
};

double gumbel_cdf(double t);

// Power-law weights only: X needs h symbolically.
GumbelScaling gumbel_scaling(const WeightSequence& w, std::int64_t n,
                             Model model);

struct Example1Scaling {
  double f = 0.0;           // f(n) or its zeta-corrected variant
  double beta_first = 0.0;  // 1/f
  double lnX = 0.0;         // three-term expansion
};

// c_n = n^(alpha-1) rho^-n. The multiset branch with rho = 1 divides n by
// zeta(alpha+1).
Example1Scaling example1_scaling(double n, double alpha, double rho,
                                 Model model);

struct SmallestLimit {
  double value = 0.0;
  bool diverged = false;
};

SmallestLimit smallest_limit(const WeightSequence& w, std::int64_t s,
                             Model model);

// Asymptotic E[kappa^ell]. The multiset branch with rho = 1 supports only
// ell in {1, 2}.
AsymptoticEstimate moment_estimate(const WeightSequence& w, std::int64_t n,
                                   int ell, Model model);

enum class EmRegime { kPower, kLog, kZeta };

const char* to_string(EmRegime regime);

struct EmPrediction {
  double value = 0.0;
  EmRegime regime = EmRegime::kPower;
  double constant = 1.0;  // d_1, 1 or zeta(beta - gamma)
};

// Leading term of sum_k k^gamma e^{-chi k} / (1 - e^{-chi k})^beta.
EmPrediction euler_maclaurin_sum_asympt(double beta, double gamma, double chi);

// Gamma(alpha) h(1/chi) chi^-alpha.
AsymptoticEstimate karamata_rhs(const WeightSequence& w, double chi);

}  // namespace clusterkit
