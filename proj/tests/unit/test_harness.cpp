#include <cmath>

#include <gtest/gtest.h>

#include "clusterkit/asymptotics.hpp"
#include "clusterkit/harness.hpp"
#include "error_matchers.hpp"
#include "oracles.hpp"

namespace ck = clusterkit;
using ck::Model;
using ck::WeightSequence;

namespace {

const WeightSequence kPartitions = WeightSequence::partitions();
const WeightSequence kGeometric = WeightSequence::power_law(1.0, 0.5);

const ck::Metric* find(const ck::ExperimentReport& r, std::int64_t n, const std::string& label) {
  for (const auto& m : r.metrics) {
    if (m.n == n && m.label == label) return &m;
  }
  return nullptr;
}

}  // namespace

TEST(VerifyCoefficients, PartitionsPassAndMatchPentagonalOracle) {
  const auto rep = ck::verify_coefficients(kPartitions, Model::kMultiset, {100, 200, 400, 800}, 0);
  EXPECT_TRUE(rep.verdict) << rep.verdict_reason;
  const auto p = oracle::partition_numbers(800);
  for (const auto& m : rep.metrics) {
    EXPECT_NEAR(m.exact, oracle::log_big(p[static_cast<std::size_t>(m.n)]), 1e-10);
  }
}

TEST(VerifyCoefficients, SetsOfListsWithOneFactorOfC) {
  const auto rep = ck::verify_coefficients(kPartitions, Model::kSet, {100, 200, 400, 800}, 1);
  EXPECT_TRUE(rep.verdict) << rep.verdict_reason;
}

TEST(VerifyCoefficients, SingletonGridRejected) {
  EXPECT_CK_ERROR(ck::verify_coefficients(kPartitions, Model::kSet, {100}, 0),
                  ck::ErrorCode::kInvalidParameter);
  EXPECT_CK_ERROR(ck::verify_coefficients(kPartitions, Model::kSet, {200, 100}, 0),
                  ck::ErrorCode::kInvalidParameter);
}

TEST(VerifyCoefficients, VerdictFollowsTolerance) {
  const auto strict = ck::verify_coefficients(kGeometric, Model::kSet, {50, 400}, 0, 1e-6);
  const auto loose = ck::verify_coefficients(kGeometric, Model::kSet, {50, 400}, 0, 0.5);
  EXPECT_FALSE(strict.verdict);
  EXPECT_TRUE(loose.verdict);
  ASSERT_EQ(strict.metrics.size(), loose.metrics.size());
  for (std::size_t i = 0; i < strict.metrics.size(); ++i) {
    EXPECT_EQ(strict.metrics[i].deviation, loose.metrics[i].deviation);
  }
}

TEST(KolmogorovDistance, StepAgainstContinuous) {
  // The step function jumps at each integer, so the left limit counts too:
  // at s = 1 it is 0 against a target of 0.5.
  EXPECT_NEAR(ck::kolmogorov_distance_step({0.0, 0.5, 1.0}, {0.2, 0.5, 0.9}), 0.5, 1e-15);
  EXPECT_NEAR(ck::kolmogorov_distance_step({0.3, 0.6, 1.0}, {0.3, 0.6, 1.0}), 0.4, 1e-15);
  EXPECT_CK_ERROR(ck::kolmogorov_distance_step({0.0}, {0.0, 1.0}), ck::ErrorCode::kInvalidParameter);
}

TEST(VerifyGumbel, GumbelAtZero) { EXPECT_NEAR(ck::gumbel_cdf(0.0), std::exp(-1.0), 1e-16); }

TEST(VerifyGumbel, PartitionDistanceDecreases) {
  ck::RunOptions opt;
  opt.threads = 3;
  const auto rep = ck::verify_gumbel(kPartitions, Model::kMultiset, {200, 800, 2000},
                                     ck::CdfMode::kExact, 0, 0.08, opt);
  EXPECT_TRUE(rep.verdict) << rep.verdict_reason;
  ASSERT_EQ(rep.metrics.size(), 3u);
  EXPECT_GT(rep.metrics[0].deviation, rep.metrics[1].deviation);
  EXPECT_GT(rep.metrics[1].deviation, rep.metrics[2].deviation);
}

TEST(VerifyGumbel, SampledDistanceWithinDkwBandOfExact) {
  ck::RunOptions opt;
  opt.threads = 4;
  opt.seed = 500;
  constexpr std::int64_t kSamples = 100'000;
  const auto rep = ck::verify_gumbel(kPartitions, Model::kSet, {200, 500}, ck::CdfMode::kSampled,
                                     kSamples, 0.08, opt);
  // 99% DKW half-width; the two distances to the same target differ by at
  // most the sup distance between the empirical and exact CDFs.
  const double eps = std::sqrt(std::log(2.0 / 0.01) / (2.0 * kSamples));
  for (const auto& m : rep.metrics) {
    ASSERT_TRUE(m.empirical.has_value());
    EXPECT_LE(std::abs(*m.empirical - m.exact), eps) << m.n;
  }
}

TEST(VerifySmallest, GeometricSetLimit) {
  const auto rep = ck::verify_smallest(kGeometric, Model::kSet, {200, 1000}, 1);
  EXPECT_TRUE(rep.verdict) << rep.verdict_reason;
  const auto* m = find(rep, 1000, "s=1");
  ASSERT_NE(m, nullptr);
  EXPECT_NEAR(m->predicted, std::exp(-1.0), 1e-15);
  const auto* m0 = find(rep, 1000, "s=0");
  ASSERT_NE(m0, nullptr);
  EXPECT_EQ(m0->exact, 1.0);
  EXPECT_EQ(m0->predicted, 1.0);
}

TEST(VerifySmallest, PartitionsUseDivergentBranch) {
  const auto rep = ck::verify_smallest(kPartitions, Model::kMultiset, {1000}, 1);
  const auto* m = find(rep, 1000, "s=1 (diverged)");
  ASSERT_NE(m, nullptr);
  EXPECT_EQ(m->predicted, 0.0);
  const auto p = oracle::partition_numbers(1000);
  EXPECT_NEAR(m->exact, -std::expm1(oracle::log_big(p[999]) - oracle::log_big(p[1000])), 1e-12);
}

TEST(VerifySmallest, PartitionMultisetWithinTwoHundredthsAtOneThousand) {
  const auto rep = ck::verify_smallest(kPartitions, Model::kMultiset, {1000}, 1);
  EXPECT_TRUE(rep.verdict) << rep.verdict_reason;
}

TEST(VerifyMoments, SetMeanAndFallingFactorialIdentity) {
  const auto rep = ck::verify_moments(kPartitions, Model::kSet, {50, 200}, 2);
  EXPECT_TRUE(rep.verdict) << rep.verdict_reason;
  for (const auto& m : rep.metrics) {
    if (m.label.rfind("falling-factorial", 0) == 0) EXPECT_LE(m.deviation, ck::kIdentityTolerance);
  }
  const auto* mean = find(rep, 200, "ell=1");
  ASSERT_NE(mean, nullptr);
  EXPECT_NEAR(mean->exact / mean->predicted, 1.0, 0.10);
}

TEST(VerifyMoments, IdentityHoldsForEverySizeUpToTwoHundred) {
  std::vector<std::int64_t> grid;
  for (std::int64_t n = 1; n <= 200; n += 13) grid.push_back(n);
  for (const auto& w : {kPartitions, kGeometric, WeightSequence::power_law(2.0, 1.0)}) {
    const auto rep = ck::verify_moments(w, Model::kSet, grid, 3, 10.0);
    EXPECT_TRUE(rep.verdict) << rep.verdict_reason;
  }
}

TEST(VerifyMoments, PartitionSecondMoment) {
  const auto rep = ck::verify_moments(kPartitions, Model::kMultiset, {500}, 2, 0.15);
  EXPECT_TRUE(rep.verdict) << rep.verdict_reason;
  const auto* m2 = find(rep, 500, "ell=2");
  ASSERT_NE(m2, nullptr);
  const auto sp = ck::solve_multiset_saddle(kPartitions, 500.0);
  const double s1 = ck::eval_A_st(kPartitions, sp.r, 0, 1);
  const double s2 = ck::eval_A_st(kPartitions, sp.r, 0, 2);
  EXPECT_NEAR(m2->predicted, s1 * s1 + s2, 1e-9 * m2->predicted);
}

TEST(VerifyMoments, UnsupportedOrderPropagates) {
  EXPECT_CK_ERROR(ck::verify_moments(kPartitions, Model::kMultiset, {100}, 3),
                  ck::ErrorCode::kUnsupportedOrder);
}

TEST(VerifyLlt, SetsOfListsImprove) {
  const auto rep = ck::verify_llt(kPartitions, Model::kSet, {100, 300}, {-1.0, 0.0, 1.0});
  EXPECT_TRUE(rep.verdict) << rep.verdict_reason;
}

TEST(VerifyLlt, ExactColumnMatchesClosedForm) {
  const auto rep = ck::verify_llt(kPartitions, Model::kSet, {100, 300}, {-1.0, 0.0, 1.0}, 10.0);
  const auto a = oracle::sets_of_lists(300);
  for (const auto& m : rep.metrics) {
    const auto N = std::stoll(m.label.substr(m.label.find("N=") + 2));
    const double log_total =
        oracle::log_big(a[static_cast<std::size_t>(m.n)]) - std::lgamma(static_cast<double>(m.n) + 1.0);
    EXPECT_NEAR(m.exact, std::exp(oracle::log_bivariate_geometric(m.n, N) - log_total), 1e-12);
  }
}

TEST(VerifyLlt, PartitionMultisetOutOfScope) {
  EXPECT_CK_ERROR(ck::verify_llt(kPartitions, Model::kMultiset, {100, 200}, {0.0}),
                  ck::ErrorCode::kScope);
}

TEST(VerifyBivariate, SquareRootRule) {
  const auto rep = ck::verify_bivariate(kPartitions, {100, 400, 1600}, ck::NRule::floor_power(0.5));
  EXPECT_TRUE(rep.verdict) << rep.verdict_reason;
  for (const auto& m : rep.metrics) {
    const auto N = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(m.n))));
    EXPECT_NEAR(m.exact, oracle::log_bivariate_geometric(m.n, N), 1e-9);
  }
}

TEST(VerifyBivariate, ConstantRuleRejected) {
  EXPECT_CK_ERROR(ck::verify_bivariate(kPartitions, {100, 400}, ck::NRule::constant(5)),
                  ck::ErrorCode::kScope);
  EXPECT_CK_ERROR(ck::verify_bivariate(kPartitions, {100, 400}, ck::NRule::floor_power(1.0)),
                  ck::ErrorCode::kScope);
}

TEST(VerifyBivariate, SinglePointAtFourHundred) {
  const double d = std::abs(std::expm1(ck::bivariate_set_estimate(kPartitions, 400, 20).log_value -
                                       oracle::log_bivariate_geometric(400, 20)));
  EXPECT_LT(d, 0.1);
}

TEST(Reports, RerunIsIdenticalAndThreadIndependent) {
  ck::RunOptions one;
  ck::RunOptions four;
  four.threads = 4;
  const auto a = ck::verify_coefficients(kGeometric, Model::kMultiset, {50, 100, 200}, 1, 0.1, one);
  const auto b = ck::verify_coefficients(kGeometric, Model::kMultiset, {50, 100, 200}, 1, 0.1, four);
  ASSERT_EQ(a.metrics.size(), b.metrics.size());
  for (std::size_t i = 0; i < a.metrics.size(); ++i) {
    EXPECT_EQ(a.metrics[i].exact, b.metrics[i].exact);
    EXPECT_EQ(a.metrics[i].predicted, b.metrics[i].predicted);
  }
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_EQ(a.config_echo["n_grid"], b.config_echo["n_grid"]);
  EXPECT_EQ(a.config_echo["weights"], b.config_echo["weights"]);
}

TEST(Reports, CsvHeaderAndRows) {
  const auto rep = ck::verify_bivariate(kPartitions, {100, 400}, ck::NRule::floor_power(0.5));
  const std::string csv = ck::to_csv(rep);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "experiment,n,label,exact,predicted,empirical,deviation");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  const auto j = ck::to_json(rep);
  EXPECT_EQ(j["experiment"], "bivariate");
  EXPECT_EQ(j["metrics"].size(), 2u);
  EXPECT_TRUE(j["metrics"][0]["empirical"].is_null());
  EXPECT_EQ(j["verdict"], "pass");
}
