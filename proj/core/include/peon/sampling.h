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

#ifndef PEON_SAMPLING_H_
#define PEON_SAMPLING_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "peon/ontology.h"
#include "peon/probability.h"
#include "peon/statistics.h"

namespace peon {

// Stream tags mixed into DeriveSeed so that suites, campaigns and
// replications never share a generator.
enum StreamTag : std::uint64_t {
  kStreamSample = 1,
  kStreamUniform = 2,
  kStreamNwise = 3,
  kStreamStratified = 4,
  kStreamCampaign = 5,
  kStreamReplication = 6,
  kStreamSut = 7,
};

struct AbstractTestCase {
  PartitionIndex partition;
  std::uint64_t id = 0;
  // Uniform draws consumed for this case, in draw order.
  std::vector<double> seed_trace;
  // N-wise only: classes whose value no required combination depended on.
  std::vector<bool> free;
};

enum class StrategyKind { kPeonRandom, kStratified, kNwise, kUniformRandom, kMarginalOnly };

struct Strategy {
  StrategyKind kind = StrategyKind::kPeonRandom;
  int n = 0;                                  // N for kNwise
  std::optional<AllocationMethod> allocation;  // for kStratified
};

std::string StrategyName(const Strategy& s);

struct TestSuite {
  std::vector<AbstractTestCase> cases;
  Strategy strategy;
  std::uint64_t master_seed = 0;

  // Exact per-partition counts.
  std::map<std::uint64_t, std::int64_t> Counts() const;
};

// Case `id` uses the stream DeriveSeed(seed, {kStreamSample, id}). Factored
// joints consume one uniform per class: roots in class order first, then
// the remaining classes in class order. Dense joints consume one uniform
// and invert the cumulative table.
// Errors: InvalidArgument (count < 1), CapExceeded (dense cumulative).
TestSuite SampleAbstract(const JointDistribution& j, std::int64_t count, std::uint64_t seed);

// Every partition equally likely; one bounded integer per class.
TestSuite SampleUniform(const Ontology& o, std::int64_t count, std::uint64_t seed);

// SampleAbstract on the product of the marginals of `j`.
TestSuite SampleMarginalOnly(const JointDistribution& j, std::int64_t count, std::uint64_t seed);

struct NwiseOptions {
  // Candidate rows built per step; the one covering most new tuples wins.
  int candidates = 20;
  // Drop partitions with phi = 0; requires `joint`.
  bool exclude_impossible = false;
  // Redraw don't-care classes from `joint` conditioned on the fixed ones.
  bool fill_from_joint = false;
  const JointDistribution* joint = nullptr;
  std::uint64_t cap = kDefaultEnumerationCap;
};

// Greedy AETG-style covering suite: each row starts from an uncovered
// N-tuple and fills the remaining classes greedily in a seeded random
// order.
// Errors: NTooLarge (N > class count), InvalidArgument (N < 1).
TestSuite NwiseSuite(const Ontology& o, int n, std::uint64_t seed,
                     const NwiseOptions& options = {});

// Exactly counts[P] cases of partition P, in a seeded shuffled order.
// Errors: UnknownPartition (counts longer than the space), InvalidArgument.
TestSuite StratifiedSuite(const Ontology& o, const Allocation& allocation, std::uint64_t seed);

}  // namespace peon

#endif  // PEON_SAMPLING_H_
