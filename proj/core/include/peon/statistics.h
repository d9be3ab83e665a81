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

#ifndef PEON_STATISTICS_H_
#define PEON_STATISTICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "peon/probability.h"

namespace peon {

enum class Sidedness { kOneSidedUpper, kTwoSided };

std::string_view SidednessName(Sidedness s);

// Textbook normal-approximation sample size, reported next to the exact
// plan.
struct NormalApproximationPlan {
  std::int64_t n_required = 0;
  std::int64_t max_failures = 0;
};

struct TestPlan {
  double p0 = 0.0;
  double rel_tol = 0.0;
  double alpha = 0.0;
  double power = 0.0;
  Sidedness sidedness = Sidedness::kTwoSided;
  double p1 = 0.0;  // p0 * (1 + rel_tol)

  std::int64_t n_required = 0;
  // Reject when F > max_failures (both sidednesses) or, two-sided only,
  // when F < min_failures.
  std::int64_t max_failures = 0;
  std::int64_t min_failures = 0;
  double achieved_size = 0.0;
  double achieved_power = 0.0;

  NormalApproximationPlan normal;
};

// Reject region of the exact test at sample size n.
struct CriticalValues {
  std::int64_t max_failures = 0;
  std::int64_t min_failures = 0;  // 0 for one-sided
};

inline constexpr std::int64_t kPlanSearchCap = 50'000'000;

// Errors: DomainError (p0 or alpha outside (0, 1), n < 1).
CriticalValues ExactCriticalValues(std::int64_t n, double p0, double alpha, Sidedness s);

// Probability that the test at n with `cv` rejects when the true rate is p.
double RejectionProbability(std::int64_t n, const CriticalValues& cv, double p);

// Smallest n whose exact test has size <= alpha and power >= power at
// p1 = p0 * (1 + rel_tol).
// Errors: InfeasibleTolerance (p1 >= 1), DomainError, NonConvergence.
TestPlan PlanBernoulli(double p0, double rel_tol, double alpha, double power,
                       Sidedness sidedness = Sidedness::kTwoSided,
                       std::int64_t n_cap = kPlanSearchCap);

struct PartitionCounts {
  std::int64_t executed = 0;
  std::int64_t failed = 0;
};

// Sparse per-partition counts keyed by flat partition index.
class CampaignResult {
 public:
  // Errors: InvalidArgument (negative counts or failed > executed).
  void Add(std::uint64_t flat, std::int64_t executed, std::int64_t failed);
  void Record(std::uint64_t flat, bool failed) { Add(flat, 1, failed ? 1 : 0); }

  const std::map<std::uint64_t, PartitionCounts>& partitions() const { return partitions_; }
  PartitionCounts at(std::uint64_t flat) const;
  std::int64_t total_executed() const { return total_executed_; }
  std::int64_t total_failed() const { return total_failed_; }

 private:
  std::map<std::uint64_t, PartitionCounts> partitions_;
  std::int64_t total_executed_ = 0;
  std::int64_t total_failed_ = 0;
};

// (N - F) / N. Errors: EmptyCampaign.
double Accuracy(const CampaignResult& r);

enum class Decision { kConfirmed, kRejected };

struct ClaimReport {
  Decision decision = Decision::kConfirmed;
  std::int64_t executed = 0;
  std::int64_t failed = 0;
  double observed_rate = 0.0;
  double accuracy = 0.0;
  CriticalValues thresholds;
  double p_value = 1.0;
};

// Errors: InsufficientSample (N < n_required).
ClaimReport EvaluateClaim(const TestPlan& plan, const CampaignResult& r);

// max(failed / executed, 1 / (executed + 1)); 1 when executed == 0.
double EstimateMuI(std::int64_t executed, std::int64_t failed);

struct StratifiedEstimate {
  double mu = 0.0;
  // Mixture variance sum phi_i mu_i (1 - mu_i).
  double var = 0.0;
  // Sampling variance of mu: sum phi_i^2 mu_i (1 - mu_i) / n_i over sampled
  // partitions.
  double estimator_var = 0.0;
  // sum phi_i F_i / n_i; unsampled partitions fall back to mu_i.
  double mu_raw = 0.0;
  std::vector<double> mu_i;     // per flat partition
  std::vector<double> weights;  // phi per flat partition
};

inline constexpr double kWeightTolerance = 1e-9;

// Partitions with phi = 0 carry mu_i = 0 and do not contribute.
// Errors: WeightMismatch (sum != 1 within 1e-9, negative weight, campaign
// partition outside the weight vector).
StratifiedEstimate EstimateStratified(const CampaignResult& r, std::span<const double> weights);

enum class AllocationMethod { kNeyman, kProportional, kUniform };

std::string_view AllocationMethodName(AllocationMethod m);

// Neyman score form. kVariance: phi mu (1 - mu) / (mu_c (1 - mu_c)).
// kStandardDeviation: phi sqrt(mu (1 - mu)).
enum class NeymanForm { kVariance, kStandardDeviation };

struct Allocation {
  std::vector<std::int64_t> counts;  // per flat partition
  std::int64_t budget = 0;
  AllocationMethod method = AllocationMethod::kProportional;
};

// Scales non-negative scores to `budget` and rounds by largest remainder,
// ties to the lower index. All-zero scores give all-zero counts.
std::vector<std::int64_t> LargestRemainder(std::span<const double> scores, std::int64_t budget);

// Errors: DegenerateClaim (mu_claimed not in (0, 1)), WeightMismatch.
Allocation NeymanAllocation(std::span<const double> weights, std::span<const double> mu_i,
                            double mu_claimed, std::int64_t budget,
                            NeymanForm form = NeymanForm::kVariance);
Allocation ProportionalAllocation(std::span<const double> weights, std::int64_t budget);
// Equal counts over partitions with phi > 0.
Allocation UniformAllocation(std::span<const double> weights, std::int64_t budget);

inline constexpr double kPoolingThreshold = 5.0;

struct BalanceResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  double significance = 0.0;
  bool pass = true;
  int pooled_cells = 0;  // partitions merged into the pooled cell
  std::int64_t total = 0;
};

// Pearson chi-squared of observed counts against m * phi. Partitions with
// expected count < 5 are merged into one pooled cell; if that cell still
// has expected < 5 it is merged into the smallest unpooled cell. Any
// observation in a partition with phi = 0 gives p = 0.
// Errors: InvalidArgument (empty sample), AllPooled (fewer than 2 cells),
// UnknownPartition.
BalanceResult Chi2Balance(const std::map<std::uint64_t, std::int64_t>& observed,
                          std::span<const double> phi, double significance = 0.001);

struct MannWhitneyResult {
  double u = 0.0;  // pairs with a > b, ties counting one half
  double z = 0.0;
  double p_value = 1.0;
};

// Two-sided normal approximation with tie and continuity corrections.
// Errors: InvalidArgument (empty sample).
MannWhitneyResult MannWhitneyU(std::span<const double> a, std::span<const double> b);

}  // namespace peon

#endif  // PEON_STATISTICS_H_
