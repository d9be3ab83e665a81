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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "peon/error.h"
#include "peon/rng.h"

namespace peon {
namespace {

[[noreturn]] void Invalid(std::string message) {
  throw Error(ErrorCode::kInvalidProfile, std::move(message));
}

bool Probability01(double p) { return p >= 0.0 && p <= 1.0; }

// Marsaglia-Tsang.
double Gamma(Rng& rng, double shape) {
  if (shape < 1.0) {
    const double u = rng.NextDouble();
    return Gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x;
    double v;
    do {
      x = rng.NextNormal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.NextDouble();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Beta(Rng& rng, double a, double b) {
  const double x = Gamma(rng, a);
  const double y = Gamma(rng, b);
  return x + y > 0.0 ? x / (x + y) : 0.5;
}

std::vector<double> Cumulative(std::span<const double> phi) {
  std::vector<double> c(phi.size());
  std::partial_sum(phi.begin(), phi.end(), c.begin());
  return c;
}

std::uint64_t Draw(const std::vector<double>& cumulative, std::span<const double> phi, double u) {
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u * cumulative.back());
  std::uint64_t f = static_cast<std::uint64_t>(
      std::min<std::ptrdiff_t>(it - cumulative.begin(), static_cast<std::ptrdiff_t>(phi.size()) - 1));
  while (phi[f] <= 0.0 && f > 0) --f;
  return f;
}

double Mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double SampleSd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = Mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

SutProfile SutProfile::Uniform(double p) {
  SutProfile s;
  s.kind = Kind::kUniform;
  s.p = p;
  return s;
}

SutProfile SutProfile::Skewed(std::vector<std::uint64_t> hotspots, double p_hot, double p_cold) {
  SutProfile s;
  s.kind = Kind::kSkewed;
  s.hotspots = std::move(hotspots);
  s.p_hot = p_hot;
  s.p_cold = p_cold;
  return s;
}

SutProfile SutProfile::SkewedByMass(double hot_mass, double p_hot, double p_cold) {
  SutProfile s;
  s.kind = Kind::kSkewed;
  s.hot_mass = hot_mass;
  s.p_hot = p_hot;
  s.p_cold = p_cold;
  return s;
}

SutProfile SutProfile::Random(double beta_a, double beta_b, std::uint64_t seed) {
  SutProfile s;
  s.kind = Kind::kRandom;
  s.beta_a = beta_a;
  s.beta_b = beta_b;
  s.seed = seed;
  return s;
}

SutProfile SutProfile::Explicit(std::vector<double> failure) {
  SutProfile s;
  s.kind = Kind::kExplicit;
  s.failure = std::move(failure);
  return s;
}

std::string SutProfile::name() const {
  switch (kind) {
    case Kind::kUniform: return "uniform";
    case Kind::kSkewed: return "skewed";
    case Kind::kRandom: return "random";
    case Kind::kExplicit: return "explicit";
  }
  return "unknown";
}

SyntheticSut MakeSut(const JointDistribution& j, const SutProfile& profile, std::uint64_t cap) {
  SyntheticSut sut;
  sut.ontology = j.ontology_ptr();
  sut.phi = j.DenseTable(cap);
  sut.profile = profile;
  const std::size_t n = sut.phi.size();
  sut.failure.assign(n, 0.0);

  switch (profile.kind) {
    case SutProfile::Kind::kUniform:
      if (!Probability01(profile.p)) Invalid("uniform failure probability outside [0, 1]");
      std::fill(sut.failure.begin(), sut.failure.end(), profile.p);
      break;
    case SutProfile::Kind::kSkewed: {
      if (!Probability01(profile.p_hot) || !Probability01(profile.p_cold))
        Invalid("skewed failure probabilities outside [0, 1]");
      std::fill(sut.failure.begin(), sut.failure.end(), profile.p_cold);
      std::vector<std::uint64_t> hot = profile.hotspots;
      if (hot.empty()) {
        if (!(profile.hot_mass > 0.0 && profile.hot_mass < 1.0))
          Invalid("skewed profile needs hotspots or a hot mass in (0, 1)");
        std::vector<std::uint64_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::uint64_t a, std::uint64_t b) { return sut.phi[a] < sut.phi[b]; });
        double mass = 0.0;
        for (std::uint64_t f : order) {
          if (mass + sut.phi[f] > profile.hot_mass * (1.0 + 1e-12)) break;
          mass += sut.phi[f];
          hot.push_back(f);
        }
        sut.profile.hotspots = hot;
      }
      for (std::uint64_t f : hot) {
        if (f >= n) Invalid("hotspot partition " + std::to_string(f) + " outside the space");
        sut.failure[f] = profile.p_hot;
      }
      break;
    }
    case SutProfile::Kind::kRandom:
      if (!(profile.beta_a > 0.0 && profile.beta_b > 0.0)) Invalid("Beta parameters must be positive");
      for (std::uint64_t f = 0; f < n; ++f) {
        Rng rng(DeriveSeed(profile.seed, {kStreamSut, f}));
        sut.failure[f] = Beta(rng, profile.beta_a, profile.beta_b);
      }
      break;
    case SutProfile::Kind::kExplicit:
      if (profile.failure.size() != n)
        Invalid("explicit field has " + std::to_string(profile.failure.size()) + " entries, space has " +
                std::to_string(n));
      for (double p : profile.failure)
        if (!Probability01(p)) Invalid("explicit failure probability outside [0, 1]");
      sut.failure = profile.failure;
      break;
  }
  double fail = 0.0;
  for (std::size_t f = 0; f < n; ++f) fail += sut.phi[f] * sut.failure[f];
  sut.accuracy = 1.0 - fail;
  return sut;
}

CampaignResult RunCampaign(const SyntheticSut& sut, const TestSuite& suite, std::uint64_t seed) {
  CampaignResult r;
  for (const auto& c : suite.cases) {
    if (c.partition.flat >= sut.failure.size())
      throw Error(ErrorCode::kUnknownPartition, "suite partition outside the SUT's space");
    Rng rng(DeriveSeed(seed, {kStreamCampaign, c.id}));
    r.Record(c.partition.flat, rng.Bernoulli(sut.failure[c.partition.flat]));
  }
  return r;
}

PlanValidation ReplicatePlanValidation(const SyntheticSut& sut_p0, const SyntheticSut& sut_p1,
                                       const TestPlan& plan, int replications, std::uint64_t seed) {
  if (replications < 100) throw Error(ErrorCode::kInvalidArgument, "need at least 100 replications");
  const CriticalValues cv{plan.max_failures, plan.min_failures};
  auto reject_rate = [&](const SyntheticSut& sut, std::uint64_t which) {
    const std::vector<double> cumulative = Cumulative(sut.phi);
    int rejections = 0;
    for (int rep = 0; rep < replications; ++rep) {
      Rng rng(DeriveSeed(seed, {kStreamReplication, which, static_cast<std::uint64_t>(rep)}));
      std::int64_t failed = 0;
      for (std::int64_t i = 0; i < plan.n_required; ++i) {
        const std::uint64_t f = Draw(cumulative, sut.phi, rng.NextDouble());
        failed += rng.Bernoulli(sut.failure[f]);
      }
      rejections += failed > cv.max_failures || failed < cv.min_failures;
    }
    return static_cast<double>(rejections) / replications;
  };
  PlanValidation v;
  v.replications = replications;
  v.empirical_size = reject_rate(sut_p0, 0);
  v.empirical_power = reject_rate(sut_p1, 1);
  v.se_size = std::sqrt(v.empirical_size * (1 - v.empirical_size) / replications);
  v.se_power = std::sqrt(v.empirical_power * (1 - v.empirical_power) / replications);
  return v;
}

const StrategyResult& ExperimentReport::Find(std::string_view name) const {
  for (const auto& s : strategies)
    if (s.name == name) return s;
  throw Error(ErrorCode::kInvalidArgument, "no strategy named " + std::string(name));
}

Strategy ParseStrategy(std::string_view name) {
  Strategy s;
  if (name == "peon_random") {
    s.kind = StrategyKind::kPeonRandom;
  } else if (name == "uniform_random") {
    s.kind = StrategyKind::kUniformRandom;
  } else if (name == "marginal_only") {
    s.kind = StrategyKind::kMarginalOnly;
  } else if (name == "stratified_neyman") {
    s.kind = StrategyKind::kStratified;
    s.allocation = AllocationMethod::kNeyman;
  } else if (name.starts_with("nwise(") && name.ends_with(")") && name.size() > 7) {
    s.kind = StrategyKind::kNwise;
    const std::string digits(name.substr(6, name.size() - 7));
    if (digits.find_first_not_of("0123456789") != std::string::npos)
      throw Error(ErrorCode::kInvalidArgument, "bad strategy " + std::string(name));
    s.n = std::stoi(digits);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown strategy " + std::string(name));
  }
  return s;
}

std::string ComparisonName(const Strategy& s) {
  if (s.kind == StrategyKind::kStratified) return "stratified_neyman";
  return StrategyName(s);
}

namespace {

TestSuite NwiseToSize(const JointDistribution& j, int n, std::int64_t size, std::uint64_t seed,
                      const ComparisonOptions& options) {
  NwiseOptions nw;
  nw.candidates = options.nwise_candidates;
  nw.fill_from_joint = options.nwise_fill;
  nw.exclude_impossible = options.exclude_impossible;
  nw.joint = &j;
  TestSuite suite;
  suite.strategy.kind = StrategyKind::kNwise;
  suite.strategy.n = n;
  suite.master_seed = seed;
  for (std::uint64_t block = 0; static_cast<std::int64_t>(suite.cases.size()) < size; ++block) {
    TestSuite part = NwiseSuite(j.ontology(), n, DeriveSeed(seed, {block}), nw);
    for (auto& c : part.cases) {
      if (static_cast<std::int64_t>(suite.cases.size()) == size) break;
      c.id = suite.cases.size();
      suite.cases.push_back(std::move(c));
    }
  }
  return suite;
}

// Pilot of half the budget (one test per positive partition, the rest
// proportional), then the remainder by Neyman on the pilot estimates.
double StratifiedNeymanAccuracy(const SyntheticSut& sut, std::int64_t size, std::uint64_t suite_seed,
                                std::uint64_t campaign_seed, const ComparisonOptions& options) {
  const Ontology& o = *sut.ontology;
  const std::int64_t pilot_budget = size / 2;
  std::int64_t positive = 0;
  for (double w : sut.phi) positive += w > 0.0;
  Allocation pilot = ProportionalAllocation(sut.phi, std::max<std::int64_t>(0, pilot_budget - positive));
  if (pilot_budget >= positive)
    for (std::size_t f = 0; f < sut.phi.size(); ++f) pilot.counts[f] += sut.phi[f] > 0.0;
  pilot.budget = pilot_budget;
  CampaignResult pilot_result =
      RunCampaign(sut, StratifiedSuite(o, pilot, DeriveSeed(suite_seed, {0})), DeriveSeed(campaign_seed, {0}));

  std::vector<double> mu(sut.phi.size(), 0.0);
  for (std::size_t f = 0; f < mu.size(); ++f) {
    const PartitionCounts c = pilot_result.at(f);
    mu[f] = EstimateMuI(c.executed, c.failed);
  }
  const Allocation main =
      NeymanAllocation(sut.phi, mu, options.mu_claimed, size - pilot_budget, NeymanForm::kVariance);
  CampaignResult total = pilot_result;
  const CampaignResult second =
      RunCampaign(sut, StratifiedSuite(o, main, DeriveSeed(suite_seed, {1})), DeriveSeed(campaign_seed, {1}));
  for (const auto& [flat, c] : second.partitions()) total.Add(flat, c.executed, c.failed);
  return 1.0 - EstimateStratified(total, sut.phi).mu_raw;
}

}  // namespace

ExperimentReport StrategyComparison(const JointDistribution& j, const SyntheticSut& sut,
                                    const std::vector<Strategy>& strategies, std::int64_t suite_size,
                                    int replications, std::uint64_t seed,
                                    const ComparisonOptions& options) {
  if (suite_size < 100) throw Error(ErrorCode::kInvalidArgument, "suite size must be >= 100");
  if (replications < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one replication");
  ExperimentReport report;
  report.ground_truth = sut.accuracy;
  report.replications = replications;
  report.suite_size = suite_size;
  report.seed = seed;

  const JointDistribution marginal = MarginalProduct(j);
  for (std::size_t si = 0; si < strategies.size(); ++si) {
    const Strategy& s = strategies[si];
    StrategyResult result;
    result.name = ComparisonName(s);
    std::vector<double> accuracies;
    std::vector<double> abs_dev;
    for (int rep = 0; rep < replications; ++rep) {
      const std::uint64_t r = static_cast<std::uint64_t>(rep);
      const std::uint64_t suite_seed = DeriveSeed(seed, {kStreamReplication, si, r});
      const std::uint64_t campaign_seed = DeriveSeed(seed, {kStreamCampaign, si, r});
      double acc = 0.0;
      if (s.kind == StrategyKind::kStratified) {
        acc = StratifiedNeymanAccuracy(sut, suite_size, suite_seed, campaign_seed, options);
      } else {
        TestSuite suite;
        switch (s.kind) {
          case StrategyKind::kPeonRandom: suite = SampleAbstract(j, suite_size, suite_seed); break;
          case StrategyKind::kUniformRandom:
            suite = SampleUniform(j.ontology(), suite_size, suite_seed);
            break;
          case StrategyKind::kMarginalOnly:
            suite = SampleAbstract(marginal, suite_size, suite_seed);
            break;
          case StrategyKind::kNwise: suite = NwiseToSize(j, s.n, suite_size, suite_seed, options); break;
          case StrategyKind::kStratified: break;
        }
        acc = Accuracy(RunCampaign(sut, suite, campaign_seed));
      }
      accuracies.push_back(acc);
      result.deviations.push_back(acc - sut.accuracy);
      abs_dev.push_back(std::abs(acc - sut.accuracy));
    }
    result.mean_accuracy = Mean(accuracies);
    result.sd_accuracy = SampleSd(accuracies);
    result.mean_abs_deviation = Mean(abs_dev);
    result.mad_se = SampleSd(abs_dev) / std::sqrt(static_cast<double>(replications));
    report.strategies.push_back(std::move(result));
  }
  return report;
}

double DeviationGapSigma(const StrategyResult& better, const StrategyResult& worse) {
  const double se = std::hypot(better.mad_se, worse.mad_se);
  const double gap = worse.mean_abs_deviation - better.mean_abs_deviation;
  if (se == 0.0) return gap > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return gap / se;
}

}  // namespace peon
