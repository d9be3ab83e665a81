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

#ifndef PEON_SIMULATOR_H_
#define PEON_SIMULATOR_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "peon/probability.h"
#include "peon/sampling.h"
#include "peon/statistics.h"

namespace peon {

struct SutProfile {
  enum class Kind { kUniform, kSkewed, kRandom, kExplicit };

  Kind kind = Kind::kUniform;
  double p = 0.0;  // kUniform
  // kSkewed: explicit hotspot partitions, or (when empty) the lowest-phi
  // partitions whose cumulative mass stays <= hot_mass.
  std::vector<std::uint64_t> hotspots;
  double hot_mass = 0.0;
  double p_hot = 0.0;
  double p_cold = 0.0;
  // kRandom: p_P ~ Beta(beta_a, beta_b) per partition.
  double beta_a = 1.0;
  double beta_b = 1.0;
  std::uint64_t seed = 0;
  // kExplicit: p_P per flat partition.
  std::vector<double> failure;

  static SutProfile Uniform(double p);
  static SutProfile Skewed(std::vector<std::uint64_t> hotspots, double p_hot, double p_cold);
  static SutProfile SkewedByMass(double hot_mass, double p_hot, double p_cold);
  static SutProfile Random(double beta_a, double beta_b, std::uint64_t seed);
  static SutProfile Explicit(std::vector<double> failure);

  std::string name() const;
};

// Bernoulli failure field over the partition space.
struct SyntheticSut {
  std::shared_ptr<const Ontology> ontology;
  std::vector<double> phi;
  std::vector<double> failure;  // p_P per flat partition
  SutProfile profile;
  // 1 - sum phi_P p_P.
  double accuracy = 1.0;
};

// Errors: InvalidProfile, CapExceeded.
SyntheticSut MakeSut(const JointDistribution& j, const SutProfile& profile,
                     std::uint64_t cap = kDefaultEnumerationCap);

// Case `id` fails with probability p_P on stream
// DeriveSeed(seed, {kStreamCampaign, id}).
CampaignResult RunCampaign(const SyntheticSut& sut, const TestSuite& suite, std::uint64_t seed);

struct PlanValidation {
  int replications = 0;
  double empirical_size = 0.0;
  double empirical_power = 0.0;
  double se_size = 0.0;   // binomial Monte-Carlo standard errors
  double se_power = 0.0;
};

// Plan-sized campaigns drawn from each SUT's phi.
// Errors: InvalidArgument (replications < 100).
PlanValidation ReplicatePlanValidation(const SyntheticSut& sut_p0, const SyntheticSut& sut_p1,
                                       const TestPlan& plan, int replications, std::uint64_t seed);

struct ComparisonOptions {
  // N-wise rows: don't-care classes redrawn from the joint.
  bool nwise_fill = true;
  bool exclude_impossible = false;
  int nwise_candidates = 20;
  double mu_claimed = 0.05;
};

struct StrategyResult {
  std::string name;
  double mean_accuracy = 0.0;
  double sd_accuracy = 0.0;
  double mean_abs_deviation = 0.0;
  double mad_se = 0.0;
  std::vector<double> deviations;  // estimate - ground truth, per replication
};

struct ExperimentReport {
  double ground_truth = 0.0;
  int replications = 0;
  std::int64_t suite_size = 0;
  std::uint64_t seed = 0;
  std::vector<StrategyResult> strategies;

  const StrategyResult& Find(std::string_view name) const;
};

// Comparison strategy names:
// peon_random, uniform_random, marginal_only, nwise(N), stratified_neyman.
// Errors: InvalidArgument.
Strategy ParseStrategy(std::string_view name);
std::string ComparisonName(const Strategy& s);

// Errors: InvalidArgument (suite_size < 100, replications < 1).
ExperimentReport StrategyComparison(const JointDistribution& j, const SyntheticSut& sut,
                                    const std::vector<Strategy>& strategies,
                                    std::int64_t suite_size, int replications, std::uint64_t seed,
                                    const ComparisonOptions& options = {});

// (mad(worse) - mad(better)) / sqrt(se_worse^2 + se_better^2).
double DeviationGapSigma(const StrategyResult& better, const StrategyResult& worse);

}  // namespace peon

#endif  // PEON_SIMULATOR_H_
