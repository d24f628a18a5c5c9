#include <cmath>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "clusterkit/weights.hpp"
#include "error_matchers.hpp"

using clusterkit::ErrorCode;
using clusterkit::SlowlyVarying;
using clusterkit::WeightSequence;

TEST(PowerWeights, PartitionWeightsAreAllOne) {
  const auto w = WeightSequence::partitions();
  for (int k = 1; k <= 50; ++k) EXPECT_EQ(w.at(k), 1.0);
  EXPECT_EQ(w.at(7), 1.0);
  EXPECT_EQ(w.first_positive(), 1);
  EXPECT_FALSE(w.support_end().has_value());
}

TEST(PowerWeights, LinearAndGeometricValues) {
  EXPECT_DOUBLE_EQ(WeightSequence::power_law(2.0, 1.0).at(3), 3.0);
  EXPECT_DOUBLE_EQ(WeightSequence::power_law(1.0, 0.5).at(4), 16.0);
  EXPECT_DOUBLE_EQ(WeightSequence::power_law(0.5, 1.0).at(4), 0.5);
}

TEST(PowerWeights, RejectsBadParameters) {
  EXPECT_CK_ERROR(WeightSequence::power_law(0.0, 1.0), ErrorCode::kInvalidParameter);
  EXPECT_CK_ERROR(WeightSequence::power_law(-1.0, 1.0), ErrorCode::kInvalidParameter);
  EXPECT_CK_ERROR(WeightSequence::power_law(1.0, 1.5), ErrorCode::kInvalidParameter);
  EXPECT_CK_ERROR(WeightSequence::power_law(1.0, 0.0), ErrorCode::kInvalidParameter);
  EXPECT_CK_ERROR(SlowlyVarying::constant_value(0.0), ErrorCode::kInvalidParameter);
}

TEST(PowerWeights, LogPowerFactorIsFrozenBelowTwo) {
  const auto h = SlowlyVarying::log_power(2.0);
  EXPECT_DOUBLE_EQ(h.at(1.0), h.at(2.0));
  EXPECT_NEAR(h.at(10.0), std::pow(std::log(10.0), 2.0), 1e-12);
  const auto w = WeightSequence::power_law(1.5, 0.8, h);
  EXPECT_GT(w.at(1), 0.0);
}

TEST(PowerWeights, FactorisationRecoversHForLargeIndices) {
  const auto h = SlowlyVarying::log_power(0.7);
  for (double alpha : {0.5, 1.0, 2.5}) {
    for (double rho : {1.0, 0.5, 0.1}) {
      const auto w = WeightSequence::power_law(alpha, rho, h);
      for (std::int64_t k : {1, 2, 10, 1000, 100000, 1000000}) {
        const double kd = static_cast<double>(k);
        // Compare in log space: c_k itself overflows for small rho.
        const double log_ratio =
            w.log_at(k) + kd * std::log(rho) + (1.0 - alpha) * std::log(kd);
        EXPECT_NEAR(log_ratio, h.log_at(kd), 1e-15 * std::max(1.0, std::abs(w.log_at(k))))
            << "alpha=" << alpha << " rho=" << rho << " k=" << k;
      }
    }
  }
}

TEST(ExplicitWeights, LeadingZerosAndFiniteSupport) {
  const auto w = WeightSequence::explicit_values({0.0, 0.0, 5.0});
  EXPECT_EQ(w.at(2), 0.0);
  EXPECT_EQ(w.at(3), 5.0);
  EXPECT_EQ(w.at(4), 0.0);
  EXPECT_EQ(w.first_positive(), 3);
  ASSERT_TRUE(w.support_end().has_value());
  EXPECT_EQ(*w.support_end(), 3);
  EXPECT_FALSE(w.finite_radius());
  EXPECT_TRUE(std::isinf(w.log_at(1)));
}

TEST(ExplicitWeights, RejectsNegativeOrAllZero) {
  EXPECT_CK_ERROR(WeightSequence::explicit_values({1.0, -1.0}), ErrorCode::kInvalidParameter);
  EXPECT_CK_ERROR(WeightSequence::explicit_values({0.0, 0.0}), ErrorCode::kInvalidParameter);
  EXPECT_CK_ERROR(WeightSequence::explicit_values({1.0}).require_alpha(),
                  ErrorCode::kInvalidParameter);
}

TEST(OscillatingBounds, PartitionWeightsSitInsideWideBand) {
  const auto r = clusterkit::verify_oscillating_bounds(
      WeightSequence::partitions(), 0.9, 1.1, 0.5, 2.0, 1, 100);
  EXPECT_TRUE(r.all_pass);
  EXPECT_EQ(r.checks.size(), 100u);
}

TEST(OscillatingBounds, LinearWeightsInsideBand) {
  const auto r = clusterkit::verify_oscillating_bounds(
      WeightSequence::power_law(2.0, 1.0), 1.5, 2.5, 0.5, 2.0, 2, 100);
  EXPECT_TRUE(r.all_pass);
}

TEST(OscillatingBounds, ReportsFirstFailure) {
  const auto r = clusterkit::verify_oscillating_bounds(
      WeightSequence::partitions(), 2.0, 3.0, 1.0, 1.0, 2, 10);
  EXPECT_FALSE(r.all_pass);
  ASSERT_TRUE(r.first_failure.has_value());
  EXPECT_EQ(*r.first_failure, 2);
  EXPECT_FALSE(r.checks.front().pass);
}

TEST(OscillatingBounds, DegenerateBandPinsExactPowerLaw) {
  for (double alpha : {0.5, 1.0, 3.0}) {
    const auto w = WeightSequence::power_law(alpha, 0.5);
    EXPECT_TRUE(clusterkit::verify_oscillating_bounds(w, alpha, alpha, 1.0, 1.0, 1, 500).all_pass);
  }
}

TEST(OscillatingBounds, RejectsInvertedParameters) {
  const auto w = WeightSequence::partitions();
  EXPECT_CK_ERROR(clusterkit::verify_oscillating_bounds(w, 2.0, 1.0, 1.0, 2.0, 1, 5),
                  ErrorCode::kInvalidParameter);
  EXPECT_CK_ERROR(clusterkit::verify_oscillating_bounds(w, 1.0, 2.0, 3.0, 2.0, 1, 5),
                  ErrorCode::kInvalidParameter);
}

TEST(WeightJson, RoundTripsBothKinds) {
  const auto power = clusterkit::weights_from_json(nlohmann::json::parse(
      R"({"kind":"power","alpha":2.0,"rho":0.5,"h":{"type":"const","c":3.0}})"));
  EXPECT_DOUBLE_EQ(power.at(2), 3.0 * 2.0 * 4.0);
  const auto again = clusterkit::weights_from_json(clusterkit::weights_to_json(power));
  EXPECT_DOUBLE_EQ(again.at(5), power.at(5));

  const auto expl = clusterkit::weights_from_json(
      nlohmann::json::parse(R"({"kind":"explicit","values":[0,2,1],"rho":0.5})"));
  EXPECT_EQ(expl.first_positive(), 2);
  EXPECT_DOUBLE_EQ(expl.rho(), 0.5);
  EXPECT_CK_ERROR(clusterkit::weights_from_json(nlohmann::json::parse(R"({"kind":"odd"})")),
                  ErrorCode::kInvalidParameter);
}
