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

#include "peon/statistics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"
#include "peon/error.h"
#include "peon/numerics.h"
#include "peon/rng.h"
#include "test_util.h"

namespace peon {
namespace {

CampaignResult Totals(std::int64_t n, std::int64_t f) {
  CampaignResult r;
  r.Add(0, n, f);
  return r;
}

TEST(AccuracyTest, Examples) {
  EXPECT_EQ(Accuracy(Totals(10, 0)), 1.0);
  EXPECT_NEAR(Accuracy(Totals(9326, 513)), 8813.0 / 9326.0, 1e-15);
  EXPECT_NEAR(Accuracy(Totals(9326, 513)), 0.9449, 1e-4);
  EXPECT_EQ(Accuracy(Totals(4, 4)), 0.0);
  EXPECT_PEON_ERROR(Accuracy(CampaignResult{}), kEmptyCampaign);
}

TEST(CampaignResultTest, AccumulatesAndValidates) {
  CampaignResult r;
  r.Record(3, true);
  r.Record(3, false);
  r.Add(5, 10, 2);
  EXPECT_EQ(r.at(3).executed, 2);
  EXPECT_EQ(r.at(3).failed, 1);
  EXPECT_EQ(r.at(4).executed, 0);
  EXPECT_EQ(r.total_executed(), 12);
  EXPECT_EQ(r.total_failed(), 3);
  EXPECT_PEON_ERROR(r.Add(1, 2, 3), kInvalidArgument);
  EXPECT_PEON_ERROR(r.Add(1, -1, 0), kInvalidArgument);
}

TEST(PlanBernoulliTest, ReferenceParametersWithinTenPercent) {
  const TestPlan plan = PlanBernoulli(0.05, 0.1, 0.2, 0.8);
  EXPECT_NEAR(plan.p1, 0.055, 1e-15);
  EXPECT_LE(std::abs(plan.n_required - 9326), 932);
  EXPECT_LE(std::abs(plan.max_failures - 513), 51);
  EXPECT_LE(plan.achieved_size, 0.2);
  EXPECT_GE(plan.achieved_power, 0.8);
}

TEST(PlanBernoulliTest, PlanIsMinimalAndConsistent) {
  for (Sidedness s : {Sidedness::kOneSidedUpper, Sidedness::kTwoSided}) {
    const TestPlan plan = PlanBernoulli(0.1, 0.5, 0.1, 0.7, s);
    const CriticalValues cv = ExactCriticalValues(plan.n_required, 0.1, 0.1, s);
    EXPECT_EQ(cv.max_failures, plan.max_failures);
    EXPECT_EQ(cv.min_failures, plan.min_failures);
    // Independent size and power by direct pmf summation.
    double size = 0.0, power = 0.0;
    for (std::int64_t k = 0; k <= plan.n_required; ++k)
      if (k > plan.max_failures || k < plan.min_failures) {
        size += BinomialPmf(k, plan.n_required, 0.1);
        power += BinomialPmf(k, plan.n_required, plan.p1);
      }
    EXPECT_NEAR(size, plan.achieved_size, 1e-10);
    EXPECT_NEAR(power, plan.achieved_power, 1e-10);
    EXPECT_LE(size, 0.1 + 1e-12);
    EXPECT_GE(power, 0.7);
    const std::int64_t n = plan.n_required - 1;
    const CriticalValues prev = ExactCriticalValues(n, 0.1, 0.1, s);
    EXPECT_LT(RejectionProbability(n, prev, plan.p1), 0.7);
  }
}

TEST(PlanBernoulliTest, OneSidedNeedsFewerTests) {
  const TestPlan one = PlanBernoulli(0.05, 0.1, 0.2, 0.8, Sidedness::kOneSidedUpper);
  const TestPlan two = PlanBernoulli(0.05, 0.1, 0.2, 0.8, Sidedness::kTwoSided);
  EXPECT_LT(one.n_required, two.n_required);
  EXPECT_EQ(one.min_failures, 0);
}

TEST(PlanBernoulliTest, NormalApproximationReported) {
  const TestPlan plan = PlanBernoulli(0.05, 0.1, 0.2, 0.8, Sidedness::kOneSidedUpper);
  // (z_{0.8} sqrt(p0 q0) + z_{0.8} sqrt(p1 q1))^2 / (p1 - p0)^2.
  const double z = NormalQuantile(0.8);
  const double root = z * std::sqrt(0.05 * 0.95) + z * std::sqrt(0.055 * 0.945);
  EXPECT_EQ(plan.normal.n_required, static_cast<std::int64_t>(std::ceil(root * root / (0.005 * 0.005))));
}

TEST(PlanBernoulliTest, InfeasibleAndCap) {
  EXPECT_PEON_ERROR(PlanBernoulli(0.5, 1.0, 0.05, 0.8), kInfeasibleTolerance);
  EXPECT_PEON_ERROR(PlanBernoulli(0.05, 0.001, 0.05, 0.99, Sidedness::kTwoSided, 1000), kNonConvergence);
  EXPECT_PEON_ERROR(PlanBernoulli(0.05, 0.1, 0.0, 0.8), kDomainError);
}

TEST(PlanBernoulliTest, MonteCarloSizeAndPower) {
  const TestPlan plan = PlanBernoulli(0.1, 1.0, 0.5, 0.5, Sidedness::kOneSidedUpper);
  Rng rng(99);
  const int reps = 100000;
  int reject0 = 0, reject1 = 0;
  for (int r = 0; r < reps; ++r) {
    std::int64_t f0 = 0, f1 = 0;
    for (std::int64_t i = 0; i < plan.n_required; ++i) {
      const double u = rng.NextDouble();
      f0 += u < 0.1;
      f1 += u < 0.2;
    }
    reject0 += f0 > plan.max_failures;
    reject1 += f1 > plan.max_failures;
  }
  EXPECT_LE(reject0 / double(reps), 0.5 + 0.01);
  EXPECT_GE(reject1 / double(reps), 0.5 - 0.01);
}

TEST(EvaluateClaimTest, Boundary) {
  const TestPlan plan = PlanBernoulli(0.05, 0.1, 0.2, 0.8);
  auto at = EvaluateClaim(plan, Totals(plan.n_required, plan.max_failures));
  EXPECT_EQ(at.decision, Decision::kConfirmed);
  auto over = EvaluateClaim(plan, Totals(plan.n_required, plan.max_failures + 1));
  EXPECT_EQ(over.decision, Decision::kRejected);
  auto under = EvaluateClaim(plan, Totals(plan.n_required, plan.min_failures - 1));
  EXPECT_EQ(under.decision, Decision::kRejected);
  EXPECT_PEON_ERROR(EvaluateClaim(plan, Totals(plan.n_required - 1, 0)), kInsufficientSample);
}

TEST(EvaluateClaimTest, LargerCampaignRescalesThreshold) {
  const TestPlan plan = PlanBernoulli(0.05, 0.1, 0.2, 0.8, Sidedness::kOneSidedUpper);
  const std::int64_t n = 2 * plan.n_required;
  const auto report = EvaluateClaim(plan, Totals(n, plan.max_failures + 10));
  EXPECT_EQ(report.thresholds.max_failures,
            ExactCriticalValues(n, 0.05, 0.2, Sidedness::kOneSidedUpper).max_failures);
  EXPECT_GT(report.thresholds.max_failures, plan.max_failures);
  EXPECT_EQ(report.decision, Decision::kConfirmed);
  EXPECT_NEAR(report.p_value, BinomialSf(plan.max_failures + 9, n, 0.05), 1e-15);
}

TEST(EstimateMuITest, Examples) {
  EXPECT_DOUBLE_EQ(EstimateMuI(100, 10), 0.1);
  EXPECT_DOUBLE_EQ(EstimateMuI(100, 0), 1.0 / 101.0);
  EXPECT_DOUBLE_EQ(EstimateMuI(0, 0), 1.0);
}

TEST(EstimateStratifiedTest, EqualRates) {
  CampaignResult r;
  r.Add(0, 50, 5);
  r.Add(1, 20, 2);
  r.Add(2, 10, 1);
  const std::vector<double> w{0.2, 0.3, 0.5};
  const auto e = EstimateStratified(r, w);
  EXPECT_NEAR(e.mu, 0.1, 1e-15);
  EXPECT_NEAR(e.var, 0.09, 1e-15);
}

TEST(EstimateStratifiedTest, FloorArithmetic) {
  CampaignResult r;
  r.Add(0, 9, 0);
  r.Add(1, 4, 4);
  const std::vector<double> w{0.5, 0.5};
  const auto e = EstimateStratified(r, w);
  // mu_0 = 1/10, mu_1 = 1.
  EXPECT_NEAR(e.mu, 0.55, 1e-15);
  EXPECT_NEAR(e.var, 0.5 * 0.1 * 0.9, 1e-15);
  EXPECT_NEAR(e.estimator_var, 0.25 * 0.09 / 9, 1e-15);
  EXPECT_EQ(e.mu_i, (std::vector<double>{0.1, 1.0}));
  EXPECT_NEAR(e.mu_raw, 0.5, 1e-15);
}

TEST(EstimateStratifiedTest, RawRatiosAreUnbiasedFloorIsNot) {
  const std::vector<double> w{0.7, 0.2, 0.1};
  const std::vector<double> p{0.02, 0.1, 0.3};
  const std::vector<std::int64_t> n{40, 5, 3};
  const double truth = 0.7 * 0.02 + 0.2 * 0.1 + 0.1 * 0.3;
  Rng rng(6);
  const int reps = 10000;
  double sum_raw = 0, sum_sq = 0, sum_floor = 0;
  for (int r = 0; r < reps; ++r) {
    CampaignResult c;
    for (std::size_t i = 0; i < 3; ++i) {
      std::int64_t f = 0;
      for (std::int64_t k = 0; k < n[i]; ++k) f += rng.Bernoulli(p[i]);
      c.Add(i, n[i], f);
    }
    const auto e = EstimateStratified(c, w);
    sum_raw += e.mu_raw;
    sum_sq += e.mu_raw * e.mu_raw;
    sum_floor += e.mu;
  }
  const double mean = sum_raw / reps;
  const double se = std::sqrt((sum_sq / reps - mean * mean) / reps);
  EXPECT_NEAR(mean, truth, 4 * se);
  EXPECT_GE(sum_floor / reps - truth, 0.0);
}

TEST(EstimateStratifiedTest, WeightMismatch) {
  const std::vector<double> w{0.5, 0.4};
  EXPECT_PEON_ERROR(EstimateStratified(Totals(10, 1), w), kWeightMismatch);
}

TEST(LargestRemainderTest, SumsToBudgetWithIndexTieBreak) {
  const std::vector<double> s{1, 1, 1};
  EXPECT_EQ(LargestRemainder(s, 4), (std::vector<std::int64_t>{2, 1, 1}));
  EXPECT_EQ(LargestRemainder(s, 0), (std::vector<std::int64_t>{0, 0, 0}));
  const std::vector<double> t{0.1, 0.6, 0.3};
  EXPECT_EQ(LargestRemainder(t, 10), (std::vector<std::int64_t>{1, 6, 3}));
}

TEST(NeymanAllocationTest, SymmetricPartitionsGetEqualShares) {
  const std::vector<double> w(4, 0.25), mu(4, 0.1);
  const auto a = NeymanAllocation(w, mu, 0.1, 10);
  EXPECT_EQ(a.counts, (std::vector<std::int64_t>{3, 3, 2, 2}));
}

TEST(NeymanAllocationTest, RiskierPartitionGetsMore) {
  const std::vector<double> w{0.5, 0.5}, mu{0.5, 0.01};
  for (NeymanForm form : {NeymanForm::kVariance, NeymanForm::kStandardDeviation}) {
    const auto a = NeymanAllocation(w, mu, 0.05, 1000, form);
    EXPECT_GT(a.counts[0], a.counts[1]);
    EXPECT_EQ(a.counts[0] + a.counts[1], 1000);
  }
  // Scores 0.25 versus 0.0099.
  EXPECT_EQ(NeymanAllocation(w, mu, 0.05, 1000).counts[0], 962);
}

TEST(NeymanAllocationTest, ZeroBudgetAndDegenerateClaim) {
  const std::vector<double> w{0.5, 0.5}, mu{0.5, 0.01};
  EXPECT_EQ(NeymanAllocation(w, mu, 0.05, 0).counts, (std::vector<std::int64_t>{0, 0}));
  EXPECT_PEON_ERROR(NeymanAllocation(w, mu, 0.0, 10), kDegenerateClaim);
  EXPECT_PEON_ERROR(NeymanAllocation(w, mu, 1.0, 10), kDegenerateClaim);
}

TEST(NeymanAllocationTest, ScaleInvariance) {
  Rng rng(4);
  std::vector<double> w(12), mu(12);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = rng.NextDouble(), mu[i] = 0.5 * rng.NextDouble();
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  std::vector<double> scaled = w;
  for (double& x : scaled) x *= 7.5;
  const double scaled_total = std::accumulate(scaled.begin(), scaled.end(), 0.0);
  for (double& x : scaled) x /= scaled_total;
  for (NeymanForm form : {NeymanForm::kVariance, NeymanForm::kStandardDeviation})
    EXPECT_EQ(NeymanAllocation(w, mu, 0.05, 997, form).counts, NeymanAllocation(scaled, mu, 0.05, 997, form).counts);
}

TEST(ProportionalAllocationTest, FollowsWeights) {
  const std::vector<double> w{0.5, 0.3, 0.2, 0.0};
  EXPECT_EQ(ProportionalAllocation(w, 10).counts, (std::vector<std::int64_t>{5, 3, 2, 0}));
  EXPECT_EQ(UniformAllocation(w, 9).counts, (std::vector<std::int64_t>{3, 3, 3, 0}));
}

TEST(Chi2BalanceTest, ExactExpectationGivesZero) {
  const std::vector<double> phi{0.5, 0.25, 0.25};
  const auto r = Chi2Balance({{0, 50}, {1, 25}, {2, 25}}, phi);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.dof, 2);
  EXPECT_TRUE(r.pass);
}

TEST(Chi2BalanceTest, HandComputedStatistic) {
  const std::vector<double> phi{0.5, 0.5};
  const auto r = Chi2Balance({{0, 60}, {1, 40}}, phi);
  // (10^2 + 10^2) / 50 = 4, survival exp(-2) for... one dof: erfc(sqrt(2)).
  EXPECT_NEAR(r.statistic, 4.0, 1e-12);
  EXPECT_NEAR(r.p_value, std::erfc(std::sqrt(2.0)), 1e-12);
}

TEST(Chi2BalanceTest, PoolingOfSmallCells) {
  // m = 100: expected 60, 30, 4, 3, 3. The three small cells pool to 10.
  const std::vector<double> phi{0.6, 0.3, 0.04, 0.03, 0.03};
  const auto r = Chi2Balance({{0, 60}, {1, 30}, {2, 10}}, phi);
  EXPECT_EQ(r.pooled_cells, 3);
  EXPECT_EQ(r.dof, 2);
  EXPECT_NEAR(r.statistic, 0.0, 1e-12);
  // Pool of 4 < 5 merges into the smallest regular cell (expected 30 -> 34).
  const std::vector<double> phi2{0.6, 0.36, 0.04};
  const auto r2 = Chi2Balance({{0, 60}, {1, 40}}, phi2);
  EXPECT_EQ(r2.dof, 1);
  EXPECT_NEAR(r2.statistic, 0.0, 1e-12);
}

TEST(Chi2BalanceTest, ImpossiblePartitionHitAndAllPooled) {
  const std::vector<double> phi{0.5, 0.5, 0.0};
  EXPECT_EQ(Chi2Balance({{0, 50}, {1, 49}, {2, 1}}, phi).p_value, 0.0);
  EXPECT_PEON_ERROR(Chi2Balance({{0, 2}, {1, 1}}, phi), kAllPooled);
}

TEST(Chi2BalanceTest, DoubledMassIsDetected) {
  std::vector<double> phi(32, 1.0 / 32);
  std::vector<double> shifted = phi;
  shifted[0] *= 2;
  for (double& s : shifted) s /= 1.0 + 1.0 / 32;
  Rng rng(8);
  std::map<std::uint64_t, std::int64_t> counts;
  for (int i = 0; i < 10000; ++i) {
    double u = rng.NextDouble();
    std::size_t k = 0;
    while (k + 1 < shifted.size() && (u -= shifted[k]) >= 0) ++k;
    ++counts[k];
  }
  EXPECT_LT(Chi2Balance(counts, phi).p_value, 1e-6);
}

// Exhaustive pair count with ties as one half.
double PairCount(const std::vector<double>& a, const std::vector<double>& b) {
  double u = 0;
  for (double x : a)
    for (double y : b) u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
  return u;
}

TEST(MannWhitneyTest, SeparatedSamples) {
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  const auto r = MannWhitneyU(a, b);
  EXPECT_EQ(r.u, 0.0);
  // Continuity-corrected normal approximation: (0 - 4.5 + 0.5) / sqrt(9 * 7 / 12).
  const double z = -4.0 / std::sqrt(63.0 / 12.0);
  EXPECT_NEAR(r.z, z, 1e-12);
  EXPECT_NEAR(r.p_value, std::erfc(-z / std::sqrt(2.0)), 1e-12);
}

TEST(MannWhitneyTest, IdenticalSamples) {
  const std::vector<double> a{1, 2, 2, 3, 4, 4, 4}, b = a;
  EXPECT_GE(MannWhitneyU(a, b).p_value, 0.99);
}

TEST(MannWhitneyTest, MatchesPairCountWithTies) {
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> a(1 + rng.NextBelow(30)), b(1 + rng.NextBelow(30));
    for (double& x : a) x = double(rng.NextBelow(5));
    for (double& x : b) x = double(rng.NextBelow(5));
    EXPECT_DOUBLE_EQ(MannWhitneyU(a, b).u, PairCount(a, b));
  }
}

TEST(MannWhitneyTest, TieCorrectedVariance) {
  // All values tied: variance is zero, so the test cannot reject.
  const std::vector<double> a{2, 2, 2}, b{2, 2};
  const auto r = MannWhitneyU(a, b);
  EXPECT_EQ(r.u, 3.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_PEON_ERROR(MannWhitneyU(std::vector<double>{}, b), kInvalidArgument);
}

TEST(MannWhitneyTest, NullCalibration) {
  Rng rng(31);
  int below = 0;
  const int seeds = 1000;
  for (int s = 0; s < seeds; ++s) {
    std::vector<double> a(100), b(100);
    for (double& x : a) x = rng.NextNormal();
    for (double& x : b) x = rng.NextNormal();
    below += MannWhitneyU(a, b).p_value < 0.05;
  }
  EXPECT_NEAR(below / double(seeds), 0.05, 0.02);
}

}  // namespace
}  // namespace peon
