#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "clusterkit/asymptotics.hpp"
#include "clusterkit/harness.hpp"
#include "clusterkit/saddle.hpp"
#include "clusterkit/series.hpp"
#include "clusterkit/special.hpp"
#include "error_matchers.hpp"
#include "oracles.hpp"

namespace ck = clusterkit;
using ck::EstimateSource;
using ck::Model;
using ck::WeightSequence;

namespace {

double lrel(double la, double lb) { return std::abs(std::expm1(la - lb)); }

const WeightSequence kPartitions = WeightSequence::partitions();
const WeightSequence kGeometric = WeightSequence::power_law(1.0, 0.5);
const WeightSequence kX = WeightSequence::explicit_values({1.0});

double log_sets_of_lists(int n) {
  const auto a = oracle::sets_of_lists(n);
  return oracle::log_big(a[static_cast<std::size_t>(n)]) - std::lgamma(n + 1.0);
}

}  // namespace

TEST(SetEstimate, SetsOfListsImproveWithN) {
  const double d50 = lrel(ck::coeff_estimate_set(kPartitions, 50, 0).log_value, log_sets_of_lists(50));
  const double d500 =
      lrel(ck::coeff_estimate_set(kPartitions, 500, 0).log_value, log_sets_of_lists(500));
  EXPECT_LT(d500, 0.10);
  EXPECT_LT(d500, d50);
}

TEST(SetEstimate, StirlingForExponential) {
  double prev = 1.0;
  for (int n : {5, 20, 80, 320}) {
    const auto e = ck::coeff_estimate_set(kX, n, 0);
    const double d = lrel(e.log_value, -std::lgamma(n + 1.0));
    EXPECT_LT(d, prev);
    prev = d;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(SetEstimate, PowerOfCAddsLogC) {
  const auto e0 = ck::coeff_estimate_set(kPartitions, 300, 0);
  const auto e1 = ck::coeff_estimate_set(kPartitions, 300, 1);
  ASSERT_TRUE(e1.saddle.has_value());
  EXPECT_NEAR(e1.log_value - e0.log_value, ck::log_A_s(kPartitions, e1.saddle->log_r, 0), 1e-12);
  EXPECT_EQ(e0.source, EstimateSource::kEq9);
  EXPECT_EQ(e0.saddle->kind, ck::SaddleKind::kSet);
}

TEST(SetEstimate, PowerOfCAgainstExactProduct) {
  const auto w = WeightSequence::power_law(2.0, 1.0);
  const auto C = ck::truncate_C(w, 600);
  const auto SC2 = ck::multiply(ck::multiply(ck::series_exp(C), C), C);
  EXPECT_LT(lrel(ck::coeff_estimate_set(w, 600, 2).log_value, SC2.log_coeff(600)), 0.10);
}

TEST(MultisetEstimate, PartitionsAtOneThousand) {
  const auto p = oracle::partition_numbers(1000);
  const auto e = ck::coeff_estimate_multiset(kPartitions, 1000, {});
  EXPECT_LT(lrel(e.log_value, oracle::log_big(p[1000])), 0.05);
  EXPECT_EQ(e.source, EstimateSource::kEq11);
  EXPECT_EQ(e.saddle->kind, ck::SaddleKind::kMultiset);
}

TEST(MultisetEstimate, GeometricRadiusTrend) {
  const auto G = ck::euler_transform(kGeometric, 3000);
  std::vector<double> devs;
  for (int n : {50, 300, 3000}) {
    const auto e = ck::coeff_estimate_multiset(kGeometric, n, {});
    EXPECT_EQ(e.source, EstimateSource::kEq10);
    devs.push_back(lrel(e.log_value, G.log_coeff(n)));
  }
  EXPECT_LT(devs.back(), devs.front());
  EXPECT_LT(devs.back(), 0.10);
}

TEST(MultisetEstimate, ClusterFactorIsSumOfCAtPowers) {
  const auto e0 = ck::coeff_estimate_multiset(kPartitions, 400, {});
  const auto e1 = ck::coeff_estimate_multiset(kPartitions, 400, {0});
  EXPECT_NEAR(e1.log_value - e0.log_value, ck::log_A_st(kPartitions, e1.saddle->log_r, 0, 1),
              1e-12);
}

TEST(CountEstimate, SetsOfListsWithFactorial) {
  const auto a = oracle::sets_of_lists(400);
  double prev = 1.0;
  for (int n : {100, 200, 400}) {
    const auto e = ck::count_estimate(kPartitions, n, Model::kSet);
    EXPECT_EQ(e.source, EstimateSource::kSn);
    const double d = lrel(e.log_value, oracle::log_big(a[static_cast<std::size_t>(n)]));
    EXPECT_LT(d, 0.10);
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(CountEstimate, PartitionsOfFiveHundred) {
  const auto p = oracle::partition_numbers(500);
  EXPECT_EQ(p[500], oracle::BigInt("2300165032574323995027"));
  EXPECT_LT(lrel(ck::count_estimate(kPartitions, 500, Model::kMultiset).log_value,
                 oracle::log_big(p[500])),
            0.05);
}

TEST(CountEstimate, MultisetEqualsZeroOrderCoefficientEstimate) {
  for (const auto& w : {kPartitions, kGeometric, WeightSequence::power_law(2.0, 1.0)}) {
    for (int n : {10, 250}) {
      EXPECT_EQ(ck::count_estimate(w, n, Model::kMultiset).log_value,
                ck::coeff_estimate_multiset(w, n, {}).log_value);
    }
  }
}

TEST(CountEstimate, SingleAtomMultisetIsDegenerate) {
  const auto e = ck::count_estimate(kX, 50, Model::kMultiset);
  EXPECT_TRUE(e.degenerate);
  EXPECT_LT(std::abs(e.log_value), std::log(10.0));
}

TEST(HaymanGeneral, GaussianFactorVanishesAtSaddle) {
  for (int n : {30, 400}) {
    const auto sp = ck::solve_set_saddle(kPartitions, n);
    const auto f = ck::FunctionSpec::set(0);
    const auto g = ck::hayman_coeff_general(f, kPartitions, n, sp.r);
    const auto h = ck::hayman_functionals(f, kPartitions, sp.r);
    const double C = sp.r / (1.0 - sp.r);
    const double expected =
        C - 0.5 * std::log(2.0 * std::numbers::pi * h.b) - n * std::log(sp.r);
    EXPECT_NEAR(g.log_value, expected, 1e-9 * std::abs(expected));
    EXPECT_EQ(g.source, EstimateSource::kLemma1);
  }
}

TEST(HaymanGeneral, ExponentialAtTen) {
  const auto g = ck::hayman_coeff_general(ck::FunctionSpec::set(0), kX, 10, 10.0);
  const double ratio = std::exp(g.log_value + std::lgamma(11.0));
  EXPECT_NEAR(ratio, 1.008, 0.001);
}

TEST(HaymanGeneral, SharedRadiusComparesNeighbouringCoefficients) {
  const auto sp = ck::solve_set_saddle(kPartitions, 410);
  const auto f = ck::FunctionSpec::set(0);
  const double est = ck::hayman_coeff_general(f, kPartitions, 400, sp.r).log_value -
                     ck::hayman_coeff_general(f, kPartitions, 410, sp.r).log_value;
  const double exact = log_sets_of_lists(400) - log_sets_of_lists(410);
  EXPECT_LT(lrel(est, exact), 0.02);
}

TEST(BivariateEstimate, GeometricWeightsClosedForm) {
  const auto e = ck::bivariate_set_estimate(kPartitions, 400, 20);
  EXPECT_LT(lrel(e.log_value, oracle::log_bivariate_geometric(400, 20)), 0.10);
  EXPECT_EQ(e.source, EstimateSource::kThm4);
  EXPECT_EQ(e.saddle->kind, ck::SaddleKind::kRatio);
  EXPECT_NEAR(ck::bivariate_set_estimate(kPartitions, 100, 10).saddle->r, 0.9, 1e-12);
}

TEST(BivariateEstimate, SingleAtomBoundary) {
  EXPECT_CK_ERROR(ck::bivariate_set_estimate(WeightSequence::explicit_values({1.0}, {}, 1.0), 8, 8),
                  ck::ErrorCode::kUnreachableTarget);
}

TEST(LocalLimit, CentreValue) {
  const auto p = ck::llt_pmf_prediction(kPartitions, 300, 0.0, Model::kSet);
  EXPECT_NEAR(p.probability, 1.0 / std::sqrt(2.0 * std::numbers::pi * p.mean / 2.0), 1e-14);
  EXPECT_EQ(p.N, static_cast<std::int64_t>(std::floor(p.mean)));
  EXPECT_DOUBLE_EQ(p.variance, p.mean / 2.0);
}

TEST(LocalLimit, SymmetricInT) {
  const auto lo = ck::llt_pmf_prediction(kPartitions, 300, -1.0, Model::kSet);
  const auto hi = ck::llt_pmf_prediction(kPartitions, 300, 1.0, Model::kSet);
  EXPECT_EQ(lo.probability, hi.probability);
  EXPECT_LT(lo.N, hi.N);
}

TEST(LocalLimit, PartitionMultisetIsOutOfScope) {
  EXPECT_CK_ERROR(ck::llt_pmf_prediction(kPartitions, 100, 0.0, Model::kMultiset),
                  ck::ErrorCode::kScope);
}

TEST(LocalLimit, SetsOfListsWithinFifteenPercentAtThreeHundred) {
  double worst100 = 0.0, worst300 = 0.0;
  for (double t : {-1.0, 0.0, 1.0}) {
    for (int n : {100, 300}) {
      const auto p = ck::llt_pmf_prediction(kPartitions, n, t, Model::kSet);
      const double exact = std::exp(oracle::log_bivariate_geometric(n, p.N) - log_sets_of_lists(n));
      const double d = std::abs(exact / p.probability - 1.0);
      (n == 100 ? worst100 : worst300) = std::max(n == 100 ? worst100 : worst300, d);
    }
  }
  EXPECT_LT(worst300, 0.15);
  EXPECT_LT(worst300, worst100);
}

TEST(LocalLimit, GeometricMultisetCentre) {
  const auto p = ck::llt_pmf_prediction(kGeometric, 300, 0.0, Model::kMultiset);
  const auto kappa = ck::exact_distribution(kGeometric, 300, ck::Statistic::kKappa, Model::kMultiset);
  EXPECT_LT(std::abs(kappa.values[static_cast<std::size_t>(p.N)] / p.probability - 1.0), 0.2);
}

TEST(Gumbel, UnitAlphaCollapsesToC) {
  for (Model model : {Model::kSet, Model::kMultiset}) {
    for (const auto& w : {kPartitions, kGeometric}) {
      const auto g = ck::gumbel_scaling(w, 500, model);
      const double r = w.rho() * std::exp(-g.beta_n);
      EXPECT_NEAR(g.lnX, std::log(ck::eval_A_s(w, r, 0)), 1e-12);
    }
  }
}

TEST(Gumbel, PartitionScaleNearFirstOrder) {
  const double n = 1e4;
  const auto g = ck::gumbel_scaling(kPartitions, 10000, Model::kMultiset);
  const double f_tilde = std::sqrt(6.0 * n) / std::numbers::pi;
  EXPECT_NEAR(f_tilde, 77.97, 0.01);
  EXPECT_NEAR(1.0 / g.beta_n / f_tilde, 1.0, 0.02);
  EXPECT_EQ(g.model, ck::GumbelModel::kMultisetRhoOne);
}

TEST(Gumbel, PredictionIsAValidCdf) {
  for (const auto& w : {kPartitions, kGeometric, WeightSequence::power_law(2.0, 1.0),
                        WeightSequence::power_law(1.5, 0.7, ck::SlowlyVarying::log_power(1.0))}) {
    for (Model model : {Model::kSet, Model::kMultiset}) {
      const auto g = ck::gumbel_scaling(w, 400, model);
      EXPECT_GT(g.beta_n, 0.0);
      EXPECT_LT(g.s_of_t(-1.0), g.s_of_t(1.0));
      double prev = 0.0;
      for (double s = 0.0; s <= 4000.0; s += 1.0) {
        const double c = g.cdf(s);
        EXPECT_GE(c, prev);
        prev = c;
      }
      EXPECT_LT(g.cdf(0.0), 1e-3);
      EXPECT_GT(prev, 1.0 - 1e-6);
      EXPECT_NEAR(g.t_of_s(g.s_of_t(0.3)), 0.3, 1e-9);
    }
  }
}

TEST(Gumbel, ExplicitWeightsRejected) {
  EXPECT_CK_ERROR(ck::gumbel_scaling(WeightSequence::explicit_values({1.0, 2.0}, 0.5, 1.0), 50,
                                     Model::kSet),
                  ck::ErrorCode::kScope);
}

TEST(Example1, UnitAlphaSetIsLogF) {
  const auto e = ck::example1_scaling(1e6, 1.0, 1.0, Model::kSet);
  EXPECT_NEAR(e.lnX, std::log(e.f), 1e-12);
  EXPECT_NEAR(e.beta_first, 1.0 / e.f, 1e-15);
}

TEST(Example1, AlphaTwoAtOneMillion) {
  const auto e = ck::example1_scaling(1e6, 2.0, 1.0, Model::kSet);
  EXPECT_NEAR(e.f, 79.37, 0.01);
  EXPECT_NEAR(e.lnX, 10.92, 0.01);
}

TEST(Example1, MultisetRescalesByZeta) {
  for (double alpha : {0.5, 1.0, 2.0}) {
    const auto s = ck::example1_scaling(5e4, alpha, 1.0, Model::kSet);
    const auto m = ck::example1_scaling(5e4, alpha, 1.0, Model::kMultiset);
    EXPECT_NEAR(m.f / s.f, std::pow(ck::zeta(alpha + 1.0), -1.0 / (alpha + 1.0)), 1e-12);
  }
}

TEST(SmallestLimit, GeometricWeights) {
  const auto set = ck::smallest_limit(kGeometric, 1, Model::kSet);
  EXPECT_NEAR(set.value, std::exp(-1.0), 1e-15);
  EXPECT_FALSE(set.diverged);
  EXPECT_NEAR(ck::smallest_limit(kGeometric, 1, Model::kMultiset).value, 0.25, 1e-15);
  EXPECT_EQ(ck::smallest_limit(kGeometric, 0, Model::kSet).value, 1.0);
}

TEST(SmallestLimit, PartitionMultisetDiverges) {
  for (int s : {1, 3}) {
    const auto r = ck::smallest_limit(kPartitions, s, Model::kMultiset);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_TRUE(r.diverged);
  }
}

TEST(Moments, SetsOfListsMean) {
  const int n = 300;
  double mean = 0.0;
  const double total = log_sets_of_lists(n);
  for (int N = 1; N <= n; ++N) mean += N * std::exp(oracle::log_bivariate_geometric(n, N) - total);
  EXPECT_NEAR(mean / ck::moment_estimate(kPartitions, n, 1, Model::kSet).value(), 1.0, 0.10);
}

TEST(Moments, PartitionsMeanNumberOfParts) {
  const auto kappa = ck::exact_distribution(kPartitions, 500, ck::Statistic::kKappa, Model::kMultiset);
  const double ratio =
      ck::raw_moment(kappa, 1) / ck::moment_estimate(kPartitions, 500, 1, Model::kMultiset).value();
  EXPECT_NEAR(ratio, 1.0, 0.10);
}

TEST(Moments, PartitionsSecondMomentAtFiveHundred) {
  const auto kappa = ck::exact_distribution(kPartitions, 500, ck::Statistic::kKappa, Model::kMultiset);
  const double ratio =
      ck::raw_moment(kappa, 2) / ck::moment_estimate(kPartitions, 500, 2, Model::kMultiset).value();
  EXPECT_NEAR(ratio, 1.0, 0.15);
}

TEST(Moments, SetSecondMomentIsSquareOfFirst) {
  const auto m1 = ck::moment_estimate(kGeometric, 250, 1, Model::kSet);
  const auto m2 = ck::moment_estimate(kGeometric, 250, 2, Model::kSet);
  EXPECT_EQ(m2.log_value, 2.0 * m1.log_value);
}

TEST(Moments, ThirdMomentUnsupportedForPartitions) {
  EXPECT_CK_ERROR(ck::moment_estimate(kPartitions, 100, 3, Model::kMultiset),
                  ck::ErrorCode::kUnsupportedOrder);
  EXPECT_NO_THROW(ck::moment_estimate(kGeometric, 100, 3, Model::kMultiset));
}

TEST(EulerMaclaurin, ZetaRegime) {
  const auto p = ck::euler_maclaurin_sum_asympt(2.0, 0.0, 0.01);
  EXPECT_EQ(p.regime, ck::EmRegime::kZeta);
  EXPECT_NEAR(p.value, 16449.34, 0.01);
  EXPECT_NEAR(p.value / static_cast<double>(oracle::em_sum(2.0, 0.0, 0.01)), 1.0, 0.02);
}

TEST(EulerMaclaurin, PowerRegimeClosedForm) {
  const auto p = ck::euler_maclaurin_sum_asympt(0.0, 1.0, 0.01);
  EXPECT_EQ(p.regime, ck::EmRegime::kPower);
  EXPECT_NEAR(p.constant, 1.0, 1e-10);
  EXPECT_NEAR(p.value, 1e4, 1e-6);
  const double exact = std::exp(-0.01) / std::pow(-std::expm1(-0.01), 2);
  EXPECT_NEAR(p.value / exact, 1.0, 0.02);
}

TEST(EulerMaclaurin, LogRegimeSelection) {
  const double chi = 0.02;
  const auto p = ck::euler_maclaurin_sum_asympt(1.0, 0.0, chi);
  EXPECT_EQ(p.regime, ck::EmRegime::kLog);
  EXPECT_NEAR(p.value, std::log(1.0 / chi) / chi, 1e-9);
  EXPECT_EQ(ck::euler_maclaurin_sum_asympt(2.0, 1.0, chi).regime, ck::EmRegime::kLog);
}

TEST(Karamata, UnitAlpha) {
  const auto e = ck::karamata_rhs(kPartitions, 0.01);
  EXPECT_NEAR(e.value(), 100.0, 1e-9);
  EXPECT_EQ(e.source, EstimateSource::kKaramata);
  const double exact = std::exp(-0.01) / -std::expm1(-0.01);
  EXPECT_NEAR(exact, 99.50, 0.01);
}

TEST(Karamata, AlphaTwo) {
  const auto e = ck::karamata_rhs(WeightSequence::power_law(2.0, 1.0), 0.01);
  EXPECT_NEAR(e.value(), 1e4, 1e-6);
  const double direct = static_cast<double>(oracle::karamata_sum(2.0, 0.01, [](long double) { return 1.0L; }));
  EXPECT_NEAR(e.value() / direct, 1.0, 0.02);
}

TEST(Karamata, LogarithmicH) {
  const auto w = WeightSequence::power_law(1.0, 1.0, ck::SlowlyVarying::log_power(1.0));
  EXPECT_NEAR(ck::karamata_rhs(w, 1e-3).value(), 1000.0 * std::log(1000.0), 1e-6);
}

TEST(RatioConvergence, EstimatesApproachExactAlongGrid) {
  const std::vector<std::int64_t> grid{50, 100, 200, 400, 800};
  for (const auto& w : {kPartitions, kGeometric, WeightSequence::power_law(2.0, 1.0)}) {
    for (Model model : {Model::kSet, Model::kMultiset}) {
      const auto rep = ck::verify_coefficients(w, model, grid, 0, 0.25);
      EXPECT_TRUE(rep.verdict) << rep.verdict_reason;
    }
  }
}
