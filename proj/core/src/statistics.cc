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
#include <limits>
#include <numeric>
#include <string>

#include "peon/error.h"
#include "peon/numerics.h"

namespace peon {
namespace {

[[noreturn]] void Throw(ErrorCode code, std::string message) {
  throw Error(code, std::move(message));
}

bool OpenUnit(double x) { return x > 0.0 && x < 1.0; }

double TailAlpha(double alpha, Sidedness s) {
  return s == Sidedness::kTwoSided ? alpha / 2 : alpha;
}

NormalApproximationPlan NormalPlan(double p0, double p1, double alpha, double power,
                                   Sidedness s) {
  const double za = NormalQuantile(1.0 - TailAlpha(alpha, s));
  const double zb = NormalQuantile(power);
  const double root =
      (za * std::sqrt(p0 * (1 - p0)) + zb * std::sqrt(p1 * (1 - p1))) / (p1 - p0);
  NormalApproximationPlan plan;
  plan.n_required = static_cast<std::int64_t>(std::ceil(root * root));
  const double n = static_cast<double>(plan.n_required);
  plan.max_failures = static_cast<std::int64_t>(std::floor(n * p0 + za * std::sqrt(n * p0 * (1 - p0))));
  return plan;
}

// Smallest k with P(X > k) <= tail, walking from `guess`.
std::int64_t UpperCritical(std::int64_t n, double p0, double tail, std::int64_t guess) {
  std::int64_t k = std::clamp<std::int64_t>(guess, 0, n);
  while (k < n && BinomialSf(k, n, p0) > tail) ++k;
  while (k > 0 && BinomialSf(k - 1, n, p0) <= tail) --k;
  return k;
}

// Largest k with P(X < k) <= tail.
std::int64_t LowerCritical(std::int64_t n, double p0, double tail, std::int64_t guess) {
  std::int64_t k = std::clamp<std::int64_t>(guess, 0, n);
  while (k > 0 && BinomialCdf(k - 1, n, p0) > tail) --k;
  while (k < n && BinomialCdf(k, n, p0) <= tail) ++k;
  return k;
}

CriticalValues CriticalFrom(std::int64_t n, double p0, double alpha, Sidedness s,
                            const CriticalValues& guess) {
  const double tail = TailAlpha(alpha, s);
  CriticalValues cv;
  cv.max_failures = UpperCritical(n, p0, tail, guess.max_failures);
  if (s == Sidedness::kTwoSided) cv.min_failures = LowerCritical(n, p0, tail, guess.min_failures);
  return cv;
}

CriticalValues NormalGuess(std::int64_t n, double p0, double alpha, Sidedness s) {
  const double z = NormalQuantile(1.0 - TailAlpha(alpha, s));
  const double mean = static_cast<double>(n) * p0;
  const double sd = std::sqrt(mean * (1 - p0));
  CriticalValues g;
  g.max_failures = static_cast<std::int64_t>(std::floor(mean + z * sd));
  g.min_failures = static_cast<std::int64_t>(std::ceil(mean - z * sd));
  return g;
}

}  // namespace

std::string_view SidednessName(Sidedness s) {
  return s == Sidedness::kTwoSided ? "two-sided" : "one-sided-upper";
}

CriticalValues ExactCriticalValues(std::int64_t n, double p0, double alpha, Sidedness s) {
  if (n < 1 || !OpenUnit(p0) || !OpenUnit(alpha))
    Throw(ErrorCode::kDomainError, "critical values need n >= 1 and p0, alpha in (0, 1)");
  return CriticalFrom(n, p0, alpha, s, NormalGuess(n, p0, alpha, s));
}

double RejectionProbability(std::int64_t n, const CriticalValues& cv, double p) {
  double r = BinomialSf(cv.max_failures, n, p);
  if (cv.min_failures > 0) r += BinomialCdf(cv.min_failures - 1, n, p);
  return std::min(r, 1.0);
}

TestPlan PlanBernoulli(double p0, double rel_tol, double alpha, double power, Sidedness sidedness,
                       std::int64_t n_cap) {
  if (!OpenUnit(p0)) Throw(ErrorCode::kDomainError, "p0 must lie in (0, 1)");
  if (!OpenUnit(alpha)) Throw(ErrorCode::kDomainError, "alpha must lie in (0, 1)");
  if (!OpenUnit(power)) Throw(ErrorCode::kDomainError, "power must lie in (0, 1)");
  if (!(rel_tol > 0.0)) Throw(ErrorCode::kDomainError, "rel_tol must be positive");
  const double p1 = p0 * (1.0 + rel_tol);
  if (!(p1 < 1.0))
    Throw(ErrorCode::kInfeasibleTolerance,
          "p1 = p0 * (1 + rel_tol) = " + std::to_string(p1) + " is not below 1");

  TestPlan plan;
  plan.p0 = p0;
  plan.rel_tol = rel_tol;
  plan.alpha = alpha;
  plan.power = power;
  plan.sidedness = sidedness;
  plan.p1 = p1;
  plan.normal = NormalPlan(p0, p1, alpha, power, sidedness);

  std::int64_t n = std::max<std::int64_t>(1, plan.normal.n_required / 2);
  CriticalValues cv = ExactCriticalValues(n, p0, alpha, sidedness);
  for (;; ++n) {
    if (n > n_cap)
      Throw(ErrorCode::kNonConvergence, "no plan found below n = " + std::to_string(n_cap));
    cv = CriticalFrom(n, p0, alpha, sidedness, cv);
    const double achieved = RejectionProbability(n, cv, p1);
    if (achieved >= power) {
      plan.n_required = n;
      plan.max_failures = cv.max_failures;
      plan.min_failures = cv.min_failures;
      plan.achieved_power = achieved;
      plan.achieved_size = RejectionProbability(n, cv, p0);
      return plan;
    }
  }
}

void CampaignResult::Add(std::uint64_t flat, std::int64_t executed, std::int64_t failed) {
  if (executed < 0 || failed < 0 || failed > executed)
    Throw(ErrorCode::kInvalidArgument, "partition " + std::to_string(flat) +
                                           ": need 0 <= failed <= executed");
  PartitionCounts& c = partitions_[flat];
  c.executed += executed;
  c.failed += failed;
  total_executed_ += executed;
  total_failed_ += failed;
}

PartitionCounts CampaignResult::at(std::uint64_t flat) const {
  auto it = partitions_.find(flat);
  return it == partitions_.end() ? PartitionCounts{} : it->second;
}

double Accuracy(const CampaignResult& r) {
  if (r.total_executed() < 1) Throw(ErrorCode::kEmptyCampaign, "campaign has no executed tests");
  return static_cast<double>(r.total_executed() - r.total_failed()) /
         static_cast<double>(r.total_executed());
}

ClaimReport EvaluateClaim(const TestPlan& plan, const CampaignResult& r) {
  const std::int64_t n = r.total_executed();
  const std::int64_t f = r.total_failed();
  if (n < plan.n_required)
    Throw(ErrorCode::kInsufficientSample, "campaign has " + std::to_string(n) +
                                              " tests, plan requires " +
                                              std::to_string(plan.n_required));
  ClaimReport report;
  report.executed = n;
  report.failed = f;
  report.observed_rate = static_cast<double>(f) / static_cast<double>(n);
  report.accuracy = 1.0 - report.observed_rate;
  if (n == plan.n_required) {
    report.thresholds = {plan.max_failures, plan.min_failures};
  } else {
    report.thresholds = ExactCriticalValues(n, plan.p0, plan.alpha, plan.sidedness);
  }
  const bool reject =
      f > report.thresholds.max_failures || f < report.thresholds.min_failures;
  report.decision = reject ? Decision::kRejected : Decision::kConfirmed;
  const double upper = BinomialSf(f - 1, n, plan.p0);
  if (plan.sidedness == Sidedness::kTwoSided) {
    report.p_value = std::min(1.0, 2.0 * std::min(upper, BinomialCdf(f, n, plan.p0)));
  } else {
    report.p_value = upper;
  }
  return report;
}

double EstimateMuI(std::int64_t executed, std::int64_t failed) {
  if (executed <= 0) return 1.0;
  const double n = static_cast<double>(executed);
  return std::max(static_cast<double>(failed) / n, 1.0 / (n + 1.0));
}

namespace {

void CheckWeights(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) Throw(ErrorCode::kWeightMismatch, "negative partition weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightTolerance)
    Throw(ErrorCode::kWeightMismatch, "partition weights sum to " + std::to_string(total));
}

}  // namespace

StratifiedEstimate EstimateStratified(const CampaignResult& r, std::span<const double> weights) {
  CheckWeights(weights);
  for (const auto& [flat, counts] : r.partitions())
    if (flat >= weights.size())
      Throw(ErrorCode::kWeightMismatch, "campaign partition " + std::to_string(flat) +
                                            " has no weight");
  StratifiedEstimate est;
  est.weights.assign(weights.begin(), weights.end());
  est.mu_i.assign(weights.size(), 0.0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const PartitionCounts c = r.at(i);
    const double mu = EstimateMuI(c.executed, c.failed);
    est.mu_i[i] = mu;
    est.mu += weights[i] * mu;
    est.var += weights[i] * mu * (1 - mu);
    if (c.executed > 0) {
      const double n = static_cast<double>(c.executed);
      est.estimator_var += weights[i] * weights[i] * mu * (1 - mu) / n;
      est.mu_raw += weights[i] * static_cast<double>(c.failed) / n;
    } else {
      est.mu_raw += weights[i] * mu;
    }
  }
  return est;
}

std::string_view AllocationMethodName(AllocationMethod m) {
  switch (m) {
    case AllocationMethod::kNeyman: return "neyman";
    case AllocationMethod::kProportional: return "proportional";
    case AllocationMethod::kUniform: return "uniform";
  }
  return "unknown";
}

std::vector<std::int64_t> LargestRemainder(std::span<const double> scores, std::int64_t budget) {
  if (budget < 0) Throw(ErrorCode::kInvalidArgument, "budget must be non-negative");
  std::vector<std::int64_t> counts(scores.size(), 0);
  double total = 0.0;
  for (double s : scores) {
    if (!(s >= 0.0) || !std::isfinite(s)) Throw(ErrorCode::kInvalidArgument, "scores must be finite and >= 0");
    total += s;
  }
  if (budget == 0 || total == 0.0) return counts;
  std::vector<double> remainder(scores.size());
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double quota = scores[i] / total * static_cast<double>(budget);
    counts[i] = static_cast<std::int64_t>(std::floor(quota));
    remainder[i] = quota - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < budget; i = (i + 1) % order.size()) {
    if (scores[order[i]] > 0.0) {
      ++counts[order[i]];
      ++assigned;
    }
  }
  // Floating quotas can overshoot by an ulp.
  for (std::size_t i = order.size(); assigned > budget && i-- > 0;) {
    if (counts[order[i]] > 0) {
      --counts[order[i]];
      --assigned;
    }
  }
  return counts;
}

Allocation NeymanAllocation(std::span<const double> weights, std::span<const double> mu_i,
                            double mu_claimed, std::int64_t budget, NeymanForm form) {
  if (!OpenUnit(mu_claimed))
    Throw(ErrorCode::kDegenerateClaim, "claimed failure rate must lie in (0, 1)");
  if (weights.size() != mu_i.size())
    Throw(ErrorCode::kWeightMismatch, "weights and mu_i differ in length");
  CheckWeights(weights);
  std::vector<double> scores(weights.size());
  const double denom = mu_claimed * (1 - mu_claimed);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double m = std::clamp(mu_i[i], 0.0, 1.0);
    scores[i] = form == NeymanForm::kVariance ? weights[i] * m * (1 - m) / denom
                                           : weights[i] * std::sqrt(m * (1 - m));
  }
  return {LargestRemainder(scores, budget), budget, AllocationMethod::kNeyman};
}

Allocation ProportionalAllocation(std::span<const double> weights, std::int64_t budget) {
  CheckWeights(weights);
  return {LargestRemainder(weights, budget), budget, AllocationMethod::kProportional};
}

Allocation UniformAllocation(std::span<const double> weights, std::int64_t budget) {
  CheckWeights(weights);
  std::vector<double> scores(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) scores[i] = weights[i] > 0.0 ? 1.0 : 0.0;
  return {LargestRemainder(scores, budget), budget, AllocationMethod::kUniform};
}

BalanceResult Chi2Balance(const std::map<std::uint64_t, std::int64_t>& observed,
                          std::span<const double> phi, double significance) {
  BalanceResult result;
  result.significance = significance;
  for (const auto& [flat, count] : observed) {
    if (flat >= phi.size())
      Throw(ErrorCode::kUnknownPartition, "partition " + std::to_string(flat) + " outside the space");
    if (count < 0) Throw(ErrorCode::kInvalidArgument, "negative observed count");
    result.total += count;
  }
  if (result.total < 1) Throw(ErrorCode::kInvalidArgument, "balance test needs at least one observation");
  const double m = static_cast<double>(result.total);

  auto count_of = [&](std::size_t i) -> double {
    auto it = observed.find(i);
    return it == observed.end() ? 0.0 : static_cast<double>(it->second);
  };

  struct Cell {
    double expected = 0.0;
    double observed = 0.0;
  };
  std::vector<Cell> cells;
  Cell pooled;
  bool impossible_hit = false;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double e = m * phi[i];
    const double o = count_of(i);
    if (phi[i] == 0.0) {
      if (o > 0.0) impossible_hit = true;
      continue;
    }
    if (e < kPoolingThreshold) {
      pooled.expected += e;
      pooled.observed += o;
      ++result.pooled_cells;
    } else {
      cells.push_back({e, o});
    }
  }
  if (pooled.expected > 0.0) {
    if (pooled.expected >= kPoolingThreshold || cells.empty()) {
      cells.push_back(pooled);
    } else {
      auto smallest = std::min_element(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        return a.expected < b.expected;
      });
      smallest->expected += pooled.expected;
      smallest->observed += pooled.observed;
    }
  }
  if (cells.size() < 2)
    Throw(ErrorCode::kAllPooled, "fewer than two cells with expected count >= 5");
  result.dof = static_cast<int>(cells.size()) - 1;
  if (impossible_hit) {
    result.statistic = std::numeric_limits<double>::infinity();
    result.p_value = 0.0;
  } else {
    for (const Cell& c : cells) {
      const double d = c.observed - c.expected;
      result.statistic += d * d / c.expected;
    }
    result.p_value = ChiSquaredSf(result.statistic, result.dof);
  }
  result.pass = result.p_value >= significance;
  return result;
}

MannWhitneyResult MannWhitneyU(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) Throw(ErrorCode::kInvalidArgument, "Mann-Whitney needs two non-empty samples");
  struct Obs {
    double value;
    bool from_a;
  };
  std::vector<Obs> all;
  all.reserve(a.size() + b.size());
  for (double v : a) all.push_back({v, true});
  for (double v : b) all.push_back({v, false});
  std::sort(all.begin(), all.end(), [](const Obs& x, const Obs& y) { return x.value < y.value; });

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double n = na + nb;
  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].value == all[i].value) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k)
      if (all[k].from_a) rank_sum_a += avg;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  MannWhitneyResult r;
  r.u = rank_sum_a - na * (na + 1) / 2.0;
  const double mean = na * nb / 2.0;
  const double var = na * nb / 12.0 * ((n + 1) - tie_term / (n * (n - 1)));
  if (!(var > 0.0)) {
    r.p_value = 1.0;
    return r;
  }
  const double dev = std::max(0.0, std::abs(r.u - mean) - 0.5);
  r.z = (r.u >= mean ? dev : -dev) / std::sqrt(var);
  r.p_value = std::min(1.0, 2.0 * NormalSf(std::abs(r.z)));
  return r;
}

}  // namespace peon
