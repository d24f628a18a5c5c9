#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "clusterkit/series.hpp"
#include "clusterkit/weights.hpp"

namespace clusterkit {

struct Metric {
  std::int64_t n = 0;
  std::string label;
  double exact = 0.0;
  double predicted = 0.0;
  std::optional<double> empirical;
  double deviation = 0.0;
};

struct ExperimentReport {
  std::string experiment;
  std::vector<std::int64_t> n_grid;
  std::vector<Metric> metrics;
  double tolerance = 0.0;
  bool verdict = false;
  std::string verdict_reason;
  nlohmann::json config_echo;
};

nlohmann::json to_json(const ExperimentReport& r);
// Columns: experiment,n,label,exact,predicted,empirical,deviation
std::string to_csv(const ExperimentReport& r);

struct RunOptions {
  int threads = 1;
  std::uint64_t seed = 0;
};

// Exact coefficient vs estimate; deviation |estimate/exact - 1|. Passes iff
// the deviation at max(n_grid) is below `tolerance` and below the one at
// min(n_grid). For multisets the factor is (sum_j C(x^j))^ell.
ExperimentReport verify_coefficients(const WeightSequence& w, Model model,
                                     const std::vector<std::int64_t>& n_grid,
                                     int ell, double tolerance = 0.10,
                                     const RunOptions& opt = {});

enum class CdfMode { kExact, kSampled };

// Kolmogorov distance between the CDF of the largest cluster and the Gumbel
// prediction. Passes iff the distance strictly decreases along n_grid and
// ends below `tolerance`.
ExperimentReport verify_gumbel(const WeightSequence& w, Model model,
                               const std::vector<std::int64_t>& n_grid,
                               CdfMode mode, std::int64_t samples = 0,
                               double tolerance = 0.08,
                               const RunOptions& opt = {});

// sup over real s of |F(s) - G(s)| for a step CDF F given at integer s and
// a continuous G.
double kolmogorov_distance_step(const std::vector<double>& step_cdf,
                                const std::vector<double>& target_at_integers);

// Exact P(M > s) against the limit, s = 1..s_max. Passes iff every
// deviation at max(n_grid) is below `tolerance`.
ExperimentReport verify_smallest(const WeightSequence& w, Model model,
                                 const std::vector<std::int64_t>& n_grid,
                                 std::int64_t s_max, double tolerance = 0.02,
                                 const RunOptions& opt = {});

// Exact E[kappa^ell] against the asymptotic moments for ell = 1..ell_max,
// plus (sets) the falling-factorial identity at every n.
ExperimentReport verify_moments(const WeightSequence& w, Model model,
                                const std::vector<std::int64_t>& n_grid,
                                int ell_max, double tolerance = 0.10,
                                const RunOptions& opt = {});

inline constexpr double kIdentityTolerance = 1e-10;

// Exact P(kappa = N(t)) against the local limit prediction. Passes iff the
// max deviation over t at max(n_grid) is below `tolerance` and below the one
// at min(n_grid).
ExperimentReport verify_llt(const WeightSequence& w, Model model,
                            const std::vector<std::int64_t>& n_grid,
                            const std::vector<double>& t_grid,
                            double tolerance = 0.15,
                            const RunOptions& opt = {});

// N = floor(n^exponent) with exponent in (0, 1), so that N and n/N grow.
struct NRule {
  enum class Kind { kFloorPower, kConstant };
  Kind kind = Kind::kFloorPower;
  double value = 0.5;

  static NRule floor_power(double e) { return {Kind::kFloorPower, e}; }
  static NRule constant(double N) { return {Kind::kConstant, N}; }
  std::int64_t operator()(std::int64_t n) const;
};

ExperimentReport verify_bivariate(const WeightSequence& w,
                                  const std::vector<std::int64_t>& n_grid,
                                  NRule rule, double tolerance = 0.10,
                                  const RunOptions& opt = {});

// Exact moments of kappa from a kappa table: E[kappa^ell] and E[(kappa)_ell].
double raw_moment(const ProbabilityTable& kappa, int ell);
double falling_moment(const ProbabilityTable& kappa, int ell);

}  // namespace clusterkit
