#include "clusterkit/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <nlohmann/json.hpp>

#include "clusterkit/error.hpp"
#include "clusterkit/logmath.hpp"
#include "clusterkit/special.hpp"

namespace clusterkit {
namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

// Relative size below which z^2 C''(z) is treated as identically zero.
constexpr double kDegenerateVariance = 1e-9;

double log_variance(double second, double first, bool& degenerate) {
  const double v = second - first;
  if (v <= kDegenerateVariance * second) {
    degenerate = true;
    return std::log(second);
  }
  return std::log(v);
}

bool radius_below_one(const WeightSequence& w) {
  return w.finite_radius() && w.rho() < 1.0;
}

void require_n(std::int64_t n) {
  require(n >= 1, ErrorCode::kInvalidParameter, "n must be >= 1");
}

// sum_{j>=2} C(rho^j)/j, finite for rho < 1.
double euler_tail_at_radius(const WeightSequence& w) {
  LogAccumulator acc;
  for (std::int64_t j = 2;; ++j) {
    const double term = log_A_s(w, static_cast<double>(j) * w.log_rho(), 0) -
                        std::log(static_cast<double>(j));
    acc.add(term);
    if (term == kLogZero || term < acc.max_term() - std::log(1e17)) break;
  }
  return std::exp(acc.value());
}

// Set-saddle form shared by the set and the rho < 1 multiset estimates.
AsymptoticEstimate set_saddle_estimate(const WeightSequence& w, std::int64_t n,
                                       int ell, EstimateSource source) {
  require_n(n);
  require(ell >= 0, ErrorCode::kInvalidParameter, "ell must be >= 0");
  AsymptoticEstimate e;
  e.source = source;
  const SaddlePoint sp = solve_set_saddle(w, static_cast<double>(n));
  const AuxSums sums(w, sp.log_r, -1);
  const double logC = sums.log_A(0);
  e.log_value = std::exp(logC) + ell * logC -
                0.5 * (kLog2Pi + log_variance(sums.A(2), sums.A(1), e.degenerate)) -
                static_cast<double>(n) * sp.log_r;
  e.saddle = sp;
  return e;
}

}  // namespace

const char* to_string(EstimateSource source) {
  switch (source) {
    case EstimateSource::kEq9: return "eq9";
    case EstimateSource::kEq10: return "eq10";
    case EstimateSource::kEq11: return "eq11";
    case EstimateSource::kSn: return "sn";
    case EstimateSource::kGn: return "gn";
    case EstimateSource::kLemma1: return "lemma1";
    case EstimateSource::kThm4: return "thm4";
    case EstimateSource::kThm3: return "thm3";
    case EstimateSource::kThm2: return "thm2";
    case EstimateSource::kCor1: return "cor1";
    case EstimateSource::kCor2: return "cor2";
    case EstimateSource::kEmLemma: return "em-lemma";
    case EstimateSource::kKaramata: return "karamata";
  }
  return "?";
}

double AsymptoticEstimate::value() const {
  return static_cast<double>(sign) * std::exp(log_value);
}

nlohmann::json to_json(const AsymptoticEstimate& e) {
  nlohmann::json j = {
      {"log_value", e.log_value},
      {"sign", e.sign},
      {"value", e.value()},
      {"source", to_string(e.source)},
      {"degenerate", e.degenerate},
  };
  j["saddle"] = e.saddle ? to_json(*e.saddle) : nlohmann::json(nullptr);
  return j;
}

AsymptoticEstimate coeff_estimate_set(const WeightSequence& w, std::int64_t n,
                                      int ell) {
  return set_saddle_estimate(w, n, ell, EstimateSource::kEq9);
}

AsymptoticEstimate coeff_estimate_multiset(const WeightSequence& w,
                                           std::int64_t n,
                                           const std::vector<int>& p) {
  require_n(n);
  for (int pi : p) {
    require(pi >= 0, ErrorCode::kInvalidParameter, "p_i must be >= 0");
  }
  if (radius_below_one(w)) {
    AsymptoticEstimate e = set_saddle_estimate(
        w, n, static_cast<int>(p.size()), EstimateSource::kEq10);
    e.log_value += euler_tail_at_radius(w);
    return e;
  }
  AsymptoticEstimate e;
  e.source = EstimateSource::kEq11;
  const SaddlePoint sp = solve_multiset_saddle(w, static_cast<double>(n));
  int t_max = 2;
  for (int pi : p) t_max = std::max(t_max, 1 + pi);
  const AuxSums sums(w, sp.log_r, t_max);
  double v = std::exp(sums.log_A(0, 0));
  for (int pi : p) v += sums.log_A(0, 1 + pi);
  v -= 0.5 * (kLog2Pi + log_variance(sums.A(2, 2), sums.A(1, 2), e.degenerate));
  v -= static_cast<double>(n) * sp.log_r;
  e.log_value = v;
  e.saddle = sp;
  return e;
}

AsymptoticEstimate count_estimate(const WeightSequence& w, std::int64_t n,
                                  Model model) {
  if (model == Model::kSet) {
    AsymptoticEstimate e = coeff_estimate_set(w, n, 0);
    e.log_value += std::lgamma(static_cast<double>(n) + 1.0);
    e.source = EstimateSource::kSn;
    return e;
  }
  AsymptoticEstimate e = coeff_estimate_multiset(w, n, {});
  e.source = EstimateSource::kGn;
  return e;
}

AsymptoticEstimate hayman_coeff_general(const FunctionSpec& f,
                                        const WeightSequence& w,
                                        std::int64_t n, double r) {
  require(n >= 0, ErrorCode::kInvalidParameter, "n must be >= 0");
  require(r > 0.0, ErrorCode::kInvalidParameter, "r must be positive");
  const double log_r = std::log(r);
  const AuxSums sums(w, log_r, f.t_max());
  const HaymanFunctionals h = hayman_functionals(f, sums);
  require(h.b > 0.0, ErrorCode::kContractViolation, "b(r) must be positive");
  const double dn = static_cast<double>(n);
  AsymptoticEstimate e;
  e.source = EstimateSource::kLemma1;
  e.log_value = log_F(f, sums) - 0.5 * (kLog2Pi + std::log(h.b)) - dn * log_r -
                (h.a - dn) * (h.a - dn) / (2.0 * h.b);

  SaddlePoint sp;
  sp.kind = f.model == Model::kSet ? SaddleKind::kSet : SaddleKind::kMultiset;
  sp.r = r;
  sp.log_r = log_r;
  const double radius = log_search_radius(w, sp.kind);
  sp.chi = std::isfinite(radius) ? radius - log_r
                                 : std::numeric_limits<double>::quiet_NaN();
  sp.target = dn;
  sp.residual = h.a - dn;
  sp.a_val = h.a;
  sp.b_val = h.b;
  sp.bracket_lo = sp.bracket_hi = log_r;
  sp.objective_lo = sp.objective_hi = h.a;
  e.saddle = sp;
  return e;
}

AsymptoticEstimate bivariate_set_estimate(const WeightSequence& w,
                                          std::int64_t n, std::int64_t N) {
  require_n(n);
  require(N >= 1, ErrorCode::kInvalidParameter, "N must be >= 1");
  const double alpha = w.require_alpha();
  const SaddlePoint sp =
      solve_ratio_saddle(w, static_cast<double>(n), static_cast<double>(N));
  const AuxSums sums(w, sp.log_r, -1);
  const double logC = sums.log_A(0);
  const double dN = static_cast<double>(N);
  AsymptoticEstimate e;
  e.source = EstimateSource::kThm4;
  const double log_var = log_variance(sums.A(2), sums.A(1), e.degenerate);
  e.log_value = -std::lgamma(dN + 1.0) + dN * logC -
                0.5 * (kLog2Pi + std::log(dN) + log_var - std::log(alpha + 1.0) -
                       logC) -
                static_cast<double>(n) * sp.log_r;
  e.saddle = sp;
  return e;
}

LltPrediction llt_pmf_prediction(const WeightSequence& w, std::int64_t n,
                                 double t, Model model) {
  require_n(n);
  if (model == Model::kMultiset) {
    require(radius_below_one(w), ErrorCode::kScope,
            "the local limit law for multisets is stated only for rho < 1");
  }
  const double alpha = w.require_alpha();
  LltPrediction p;
  p.saddle = solve_set_saddle(w, static_cast<double>(n));
  p.mean = std::exp(log_A_s(w, p.saddle.log_r, 0));
  p.variance = p.mean / (alpha + 1.0);
  p.N = static_cast<std::int64_t>(std::floor(p.mean + t * std::sqrt(p.variance)));
  p.probability = std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi * p.variance);
  return p;
}

const char* to_string(GumbelModel model) {
  switch (model) {
    case GumbelModel::kSet: return "set";
    case GumbelModel::kMultisetRhoBelowOne: return "multiset-rho<1";
    case GumbelModel::kMultisetRhoOne: return "multiset-rho=1";
  }
  return "?";
}

GumbelModel gumbel_model(const WeightSequence& w, Model model) {
  if (model == Model::kSet) return GumbelModel::kSet;
  return radius_below_one(w) ? GumbelModel::kMultisetRhoBelowOne
                             : GumbelModel::kMultisetRhoOne;
}

double gumbel_cdf(double t) { return std::exp(-std::exp(-t)); }

double GumbelScaling::cdf(double s) const { return gumbel_cdf(t_of_s(s)); }

GumbelScaling gumbel_scaling(const WeightSequence& w, std::int64_t n,
                             Model model) {
  require_n(n);
  require(w.symbolic_h(), ErrorCode::kScope,
          "the Gumbel scaling needs a power-law weight family with known h");
  const double alpha = w.require_alpha();
  GumbelScaling g;
  g.model = gumbel_model(w, model);
  g.saddle = g.model == GumbelModel::kMultisetRhoOne
                 ? solve_multiset_saddle(w, static_cast<double>(n))
                 : solve_set_saddle(w, static_cast<double>(n));
  g.beta_n = g.saddle.chi;
  const double logC = log_A_s(w, w.log_rho() - g.beta_n, 0);
  const double lnC = std::exp(logC);
  g.lnX = -std::lgamma(alpha) + logC;
  if (alpha != 1.0) {
    require(lnC > 0.0, ErrorCode::kOutOfRange,
            "ln C(rho e^-beta) must be positive for alpha != 1");
    g.lnX += (alpha - 1.0) * std::log(lnC);
  }
  g.lnX += w.h().log_at(lnC / g.beta_n) - w.h().log_at(1.0 / g.beta_n);
  return g;
}

Example1Scaling example1_scaling(double n, double alpha, double rho,
                                 Model model) {
  require(n > 0.0 && alpha > 0.0, ErrorCode::kInvalidParameter,
          "need n > 0 and alpha > 0");
  require(rho > 0.0 && rho <= 1.0, ErrorCode::kInvalidParameter,
          "rho must lie in (0,1]");
  double denom = std::tgamma(alpha + 1.0);
  if (model == Model::kMultiset && rho == 1.0) denom *= zeta(alpha + 1.0);
  Example1Scaling e;
  e.f = std::pow(n / denom, 1.0 / (alpha + 1.0));
  e.beta_first = 1.0 / e.f;
  e.lnX = alpha * std::log(e.f);
  if (alpha != 1.0) {
    e.lnX += (alpha - 1.0) * (std::log(std::log(e.f)) + std::log(alpha));
  }
  return e;
}

SmallestLimit smallest_limit(const WeightSequence& w, std::int64_t s,
                             Model model) {
  require(s >= 0, ErrorCode::kInvalidParameter, "s must be >= 0");
  require(w.finite_radius(), ErrorCode::kInvalidParameter,
          "the smallest-cluster limit needs a finite radius");
  double exponent = 0.0;
  for (std::int64_t k = 1; k <= s; ++k) {
    const double lc = w.log_at(k);
    if (lc == kLogZero) continue;
    const double kd = static_cast<double>(k);
    if (model == Model::kSet) {
      exponent -= std::exp(lc + kd * w.log_rho());
    } else {
      if (w.rho() >= 1.0) return {0.0, true};
      // sum_j c_k rho^{jk} / j = -c_k ln(1 - rho^k)
      exponent += std::exp(lc) * std::log1p(-std::exp(kd * w.log_rho()));
    }
  }
  return {std::exp(exponent), false};
}

AsymptoticEstimate moment_estimate(const WeightSequence& w, std::int64_t n,
                                   int ell, Model model) {
  require_n(n);
  require(ell >= 1, ErrorCode::kInvalidParameter, "ell must be >= 1");
  AsymptoticEstimate e;
  e.source = EstimateSource::kCor2;
  if (model == Model::kSet || radius_below_one(w)) {
    const SaddlePoint sp = solve_set_saddle(w, static_cast<double>(n));
    e.log_value = ell * log_A_s(w, sp.log_r, 0);
    e.saddle = sp;
    return e;
  }
  require(ell <= 2, ErrorCode::kUnsupportedOrder,
          "multiset moments with rho = 1 are available only for ell = 1, 2");
  const SaddlePoint sp = solve_multiset_saddle(w, static_cast<double>(n));
  const AuxSums sums(w, sp.log_r, 2);
  const double m1 = sums.log_A(0, 1);
  e.log_value = ell == 1 ? m1 : log_add(2.0 * m1, sums.log_A(0, 2));
  e.saddle = sp;
  return e;
}

const char* to_string(EmRegime regime) {
  switch (regime) {
    case EmRegime::kPower: return "power";
    case EmRegime::kLog: return "log";
    case EmRegime::kZeta: return "zeta";
  }
  return "?";
}

EmPrediction euler_maclaurin_sum_asympt(double beta, double gamma, double chi) {
  require(beta >= 0.0 && gamma >= 0.0 && chi > 0.0,
          ErrorCode::kInvalidParameter, "need beta, gamma >= 0 and chi > 0");
  EmPrediction p;
  const double edge = 1.0 + gamma;
  if (std::abs(beta - edge) <= 1e-12 * edge) {
    p.regime = EmRegime::kLog;
    p.constant = 1.0;
    p.value = std::pow(chi, -(gamma + 1.0)) * std::log(1.0 / chi);
  } else if (beta < edge) {
    p.regime = EmRegime::kPower;
    p.constant = em_d1(beta, gamma);
    p.value = p.constant * std::pow(chi, -(gamma + 1.0));
  } else {
    p.regime = EmRegime::kZeta;
    p.constant = zeta(beta - gamma);
    p.value = p.constant * std::pow(chi, -beta);
  }
  return p;
}

AsymptoticEstimate karamata_rhs(const WeightSequence& w, double chi) {
  require(chi > 0.0, ErrorCode::kInvalidParameter, "chi must be positive");
  require(w.symbolic_h(), ErrorCode::kScope,
          "Karamata's formula needs a power-law weight family");
  const double alpha = w.require_alpha();
  AsymptoticEstimate e;
  e.source = EstimateSource::kKaramata;
  e.log_value = std::lgamma(alpha) + w.h().log_at(1.0 / chi) - alpha * std::log(chi);
  return e;
}

}  // namespace clusterkit
