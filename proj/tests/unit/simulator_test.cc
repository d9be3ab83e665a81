// Copyright 2026 The PEON Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "peon/simulator.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"
#include "peon/error.h"
#include "test_util.h"

namespace peon {
namespace {

using ::peon::testing::LoadData;
using ::peon::testing::TokenOntology;

JointDistribution TwoByTwo(double rare) {
  auto o = TokenOntology({{"x", 2}, {"y", 2}});
  return ProductMeasure(o, {Marginal::FromDoubles("x", {rare, 1 - rare}), Marginal::Uniform("y", 2)});
}

TEST(MakeSutTest, Uniform) {
  const Peon p = LoadData("reference_peon.json");
  const SyntheticSut sut = MakeSut(p.RequireJoint(), SutProfile::Uniform(0.05));
  EXPECT_EQ(sut.failure.size(), 288u);
  for (double f : sut.failure) EXPECT_EQ(f, 0.05);
  EXPECT_NEAR(sut.accuracy, 0.95, 1e-12);
}

TEST(MakeSutTest, SkewedWeightedArithmetic) {
  const JointDistribution j = TwoByTwo(0.02);
  // Partitions 0 and 1 carry x = 0, total mass 0.02.
  const SyntheticSut sut = MakeSut(j, SutProfile::Skewed({0, 1}, 0.5, 0.01));
  EXPECT_NEAR(sut.accuracy, 1 - (0.02 * 0.5 + 0.98 * 0.01), 1e-12);
  EXPECT_NEAR(sut.accuracy, 0.9802, 1e-12);
  const SyntheticSut by_mass = MakeSut(j, SutProfile::SkewedByMass(0.02, 0.5, 0.01));
  EXPECT_EQ(by_mass.failure, sut.failure);
}

TEST(MakeSutTest, RandomIsDeterministic) {
  const Peon p = LoadData("reference_peon.json");
  const SyntheticSut a = MakeSut(p.RequireJoint(), SutProfile::Random(2, 20, 3));
  const SyntheticSut b = MakeSut(p.RequireJoint(), SutProfile::Random(2, 20, 3));
  const SyntheticSut c = MakeSut(p.RequireJoint(), SutProfile::Random(2, 20, 4));
  EXPECT_EQ(a.failure, b.failure);
  EXPECT_NE(a.failure, c.failure);
  for (double f : a.failure) {
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
  }
  const double mean = std::accumulate(a.failure.begin(), a.failure.end(), 0.0) / a.failure.size();
  EXPECT_NEAR(mean, 2.0 / 22.0, 0.02);
}

TEST(MakeSutTest, InvalidProfiles) {
  const JointDistribution j = TwoByTwo(0.5);
  EXPECT_PEON_ERROR(MakeSut(j, SutProfile::Uniform(1.5)), kInvalidProfile);
  EXPECT_PEON_ERROR(MakeSut(j, SutProfile::Skewed({9}, 0.5, 0.01)), kInvalidProfile);
  EXPECT_PEON_ERROR(MakeSut(j, SutProfile::Explicit({0.1, 0.2})), kInvalidProfile);
  EXPECT_PEON_ERROR(MakeSut(j, SutProfile::Random(0, 1, 1)), kInvalidProfile);
}

TEST(RunCampaignTest, ZeroAndOneFields) {
  const Peon p = LoadData("reference_peon.json");
  const TestSuite suite = SampleAbstract(p.RequireJoint(), 1000, 1);
  EXPECT_EQ(RunCampaign(MakeSut(p.RequireJoint(), SutProfile::Uniform(0)), suite, 2).total_failed(), 0);
  EXPECT_EQ(RunCampaign(MakeSut(p.RequireJoint(), SutProfile::Uniform(1)), suite, 2).total_failed(), 1000);
}

TEST(RunCampaignTest, BinomialConcentrationAndDeterminism) {
  const Peon p = LoadData("reference_peon.json");
  const SyntheticSut sut = MakeSut(p.RequireJoint(), SutProfile::Uniform(0.5));
  const TestSuite suite = SampleAbstract(p.RequireJoint(), 10000, 1);
  const CampaignResult r = RunCampaign(sut, suite, 5);
  EXPECT_EQ(r.total_executed(), 10000);
  EXPECT_LE(std::abs(r.total_failed() - 5000), 4 * std::sqrt(10000 * 0.25));
  const CampaignResult again = RunCampaign(sut, suite, 5);
  EXPECT_EQ(again.total_failed(), r.total_failed());
  std::int64_t sum = 0;
  for (const auto& [flat, c] : r.partitions()) sum += c.executed;
  EXPECT_EQ(sum, 10000);
}

TEST(ReplicatePlanValidationTest, ZeroFieldNeverRejects) {
  const JointDistribution j = TwoByTwo(0.5);
  const TestPlan plan = PlanBernoulli(0.1, 1.0, 0.2, 0.8, Sidedness::kOneSidedUpper);
  const auto v = ReplicatePlanValidation(MakeSut(j, SutProfile::Uniform(0)), MakeSut(j, SutProfile::Uniform(0.2)),
                                         plan, 200, 1);
  EXPECT_EQ(v.empirical_size, 0.0);
  EXPECT_EQ(v.replications, 200);
}

TEST(ReplicatePlanValidationTest, SingleBernoulliPlan) {
  const JointDistribution j = TwoByTwo(0.5);
  TestPlan plan;
  plan.p0 = 0.3;
  plan.n_required = 1;
  plan.max_failures = 0;
  plan.min_failures = 0;
  plan.sidedness = Sidedness::kOneSidedUpper;
  const auto v = ReplicatePlanValidation(MakeSut(j, SutProfile::Uniform(0.3)), MakeSut(j, SutProfile::Uniform(0.6)),
                                         plan, 20000, 9);
  EXPECT_NEAR(v.empirical_size, 0.3, 4 * std::sqrt(0.21 / 20000));
  EXPECT_NEAR(v.empirical_power, 0.6, 4 * std::sqrt(0.24 / 20000));
  EXPECT_NEAR(v.se_size, std::sqrt(v.empirical_size * (1 - v.empirical_size) / 20000), 1e-12);
}

TEST(ReplicatePlanValidationTest, RequiresHundredReplications) {
  const JointDistribution j = TwoByTwo(0.5);
  const TestPlan plan = PlanBernoulli(0.1, 1.0, 0.2, 0.8);
  const SyntheticSut s = MakeSut(j, SutProfile::Uniform(0.1));
  EXPECT_PEON_ERROR(ReplicatePlanValidation(s, s, plan, 99, 1), kInvalidArgument);
}

TEST(StrategyComparisonTest, ParseStrategyNames) {
  for (const char* name : {"peon_random", "uniform_random", "marginal_only", "stratified_neyman", "nwise(3)"})
    EXPECT_EQ(ComparisonName(ParseStrategy(name)), name);
  EXPECT_PEON_ERROR(ParseStrategy("nwise(x)"), kInvalidArgument);
  EXPECT_PEON_ERROR(ParseStrategy("bogus"), kInvalidArgument);
}

TEST(StrategyComparisonTest, UniformFieldIsNeutral) {
  const Peon p = LoadData("reference_peon.json");
  const SyntheticSut sut = MakeSut(p.RequireJoint(), SutProfile::Uniform(0.05));
  std::vector<Strategy> strategies;
  for (const char* name : {"peon_random", "uniform_random", "marginal_only", "nwise(2)", "stratified_neyman"})
    strategies.push_back(ParseStrategy(name));
  const ExperimentReport r = StrategyComparison(p.RequireJoint(), sut, strategies, 1000, 40, 3);
  EXPECT_NEAR(r.ground_truth, 0.95, 1e-12);
  for (const auto& s : r.strategies) {
    const double se = s.sd_accuracy / std::sqrt(40.0);
    EXPECT_NEAR(s.mean_accuracy, 0.95, 4 * se + 1e-9) << s.name;
    EXPECT_EQ(s.deviations.size(), 40u);
  }
}

TEST(StrategyComparisonTest, SkewedOrderingAndDeterminism) {
  const Peon p = LoadData("reference_peon.json");
  const SyntheticSut sut = MakeSut(p.RequireJoint(), SutProfile::SkewedByMass(0.02, 0.5, 0.01));
  std::vector<Strategy> strategies{ParseStrategy("peon_random"), ParseStrategy("marginal_only"),
                                   ParseStrategy("uniform_random")};
  const ExperimentReport r = StrategyComparison(p.RequireJoint(), sut, strategies, 2000, 60, 7);
  const auto& peon = r.Find("peon_random");
  const auto& marginal = r.Find("marginal_only");
  const auto& uniform = r.Find("uniform_random");
  EXPECT_LT(peon.mean_abs_deviation, marginal.mean_abs_deviation);
  EXPECT_LT(marginal.mean_abs_deviation, uniform.mean_abs_deviation);
  EXPECT_GT(DeviationGapSigma(peon, marginal), 3.0);
  const ExperimentReport again = StrategyComparison(p.RequireJoint(), sut, strategies, 2000, 60, 7);
  for (std::size_t i = 0; i < r.strategies.size(); ++i)
    EXPECT_EQ(r.strategies[i].deviations, again.strategies[i].deviations);
  EXPECT_PEON_ERROR(r.Find("nwise(9)"), kInvalidArgument);
}

TEST(StrategyComparisonTest, PeonRandomIsUnbiased) {
  const Peon p = LoadData("reference_peon.json");
  const SyntheticSut sut = MakeSut(p.RequireJoint(), SutProfile::Random(1, 9, 2));
  const ExperimentReport r =
      StrategyComparison(p.RequireJoint(), sut, {ParseStrategy("peon_random")}, 500, 400, 11);
  const auto& s = r.strategies[0];
  EXPECT_NEAR(s.mean_accuracy, r.ground_truth, 4 * s.sd_accuracy / std::sqrt(400.0));
}

TEST(StrategyComparisonTest, SuiteSizeFloor) {
  const Peon p = LoadData("reference_peon.json");
  const SyntheticSut sut = MakeSut(p.RequireJoint(), SutProfile::Uniform(0.05));
  EXPECT_PEON_ERROR(StrategyComparison(p.RequireJoint(), sut, {ParseStrategy("peon_random")}, 50, 10, 1),
                    kInvalidArgument);
}

}  // namespace
}  // namespace peon
