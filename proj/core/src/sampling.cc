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

#include "peon/sampling.h"

#include <algorithm>
#include <numeric>
#include <utility>

#include "peon/error.h"
#include "peon/rng.h"

namespace peon {
namespace {

// Index of the first entry whose running sum exceeds u; rounding residue
// falls to the last entry with positive mass.
std::uint32_t InvertRow(std::span<const double> row, double u) {
  double acc = 0.0;
  std::uint32_t last = 0;
  for (std::uint32_t v = 0; v < row.size(); ++v) {
    if (row[v] <= 0.0) continue;
    acc += row[v];
    last = v;
    if (u < acc) return v;
  }
  return last;
}

std::vector<std::size_t> DrawOrder(const JointDistribution& j) {
  std::vector<std::size_t> order;
  const std::size_t k = j.ontology().class_count();
  for (std::size_t i = 0; i < k; ++i)
    if (!j.graph().parent(i)) order.push_back(i);
  for (std::size_t i = 0; i < k; ++i)
    if (j.graph().parent(i)) order.push_back(i);
  return order;
}

}  // namespace

std::string StrategyName(const Strategy& s) {
  switch (s.kind) {
    case StrategyKind::kPeonRandom: return "peon_random";
    case StrategyKind::kUniformRandom: return "uniform_random";
    case StrategyKind::kMarginalOnly: return "marginal_only";
    case StrategyKind::kNwise: return "nwise(" + std::to_string(s.n) + ")";
    case StrategyKind::kStratified:
      return "stratified(" +
             std::string(AllocationMethodName(s.allocation.value_or(AllocationMethod::kNeyman))) + ")";
  }
  return "unknown";
}

std::map<std::uint64_t, std::int64_t> TestSuite::Counts() const {
  std::map<std::uint64_t, std::int64_t> counts;
  for (const auto& c : cases) ++counts[c.partition.flat];
  return counts;
}

TestSuite SampleAbstract(const JointDistribution& j, std::int64_t count, std::uint64_t seed) {
  if (count < 1) throw Error(ErrorCode::kInvalidArgument, "sample count must be >= 1");
  const Ontology& o = j.ontology();
  TestSuite suite;
  suite.strategy.kind = StrategyKind::kPeonRandom;
  suite.master_seed = seed;
  suite.cases.reserve(static_cast<std::size_t>(count));

  if (j.mode() == JointDistribution::Mode::kDense) {
    const std::vector<double> table = j.DenseTable();
    std::vector<double> cumulative(table.size());
    std::partial_sum(table.begin(), table.end(), cumulative.begin());
    for (std::int64_t id = 0; id < count; ++id) {
      Rng rng(DeriveSeed(seed, {kStreamSample, static_cast<std::uint64_t>(id)}));
      const double u = rng.NextDouble();
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u * cumulative.back());
      std::uint64_t flat = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(
          it - cumulative.begin(), static_cast<std::ptrdiff_t>(table.size()) - 1));
      while (table[flat] <= 0.0 && flat > 0) --flat;
      suite.cases.push_back({Decode(o, flat), static_cast<std::uint64_t>(id), {u}, {}});
    }
    return suite;
  }

  const std::vector<std::size_t> order = DrawOrder(j);
  for (std::int64_t id = 0; id < count; ++id) {
    Rng rng(DeriveSeed(seed, {kStreamSample, static_cast<std::uint64_t>(id)}));
    std::vector<std::uint32_t> coords(o.class_count(), 0);
    std::vector<double> trace;
    trace.reserve(order.size());
    for (std::size_t i : order) {
      const double u = rng.NextDouble();
      trace.push_back(u);
      const auto parent = j.graph().parent(i);
      coords[i] = InvertRow(j.ChainRow(i, parent ? coords[*parent] : 0), u);
    }
    suite.cases.push_back({Encode(o, coords), static_cast<std::uint64_t>(id), std::move(trace), {}});
  }
  return suite;
}

TestSuite SampleUniform(const Ontology& o, std::int64_t count, std::uint64_t seed) {
  if (count < 1) throw Error(ErrorCode::kInvalidArgument, "sample count must be >= 1");
  TestSuite suite;
  suite.strategy.kind = StrategyKind::kUniformRandom;
  suite.master_seed = seed;
  suite.cases.reserve(static_cast<std::size_t>(count));
  for (std::int64_t id = 0; id < count; ++id) {
    Rng rng(DeriveSeed(seed, {kStreamUniform, static_cast<std::uint64_t>(id)}));
    std::vector<std::uint32_t> coords(o.class_count());
    std::vector<double> trace;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      coords[i] = static_cast<std::uint32_t>(rng.NextBelow(o.radices()[i]));
      trace.push_back(coords[i]);
    }
    suite.cases.push_back({Encode(o, coords), static_cast<std::uint64_t>(id), std::move(trace), {}});
  }
  return suite;
}

TestSuite SampleMarginalOnly(const JointDistribution& j, std::int64_t count, std::uint64_t seed) {
  TestSuite suite = SampleAbstract(MarginalProduct(j), count, seed);
  suite.strategy.kind = StrategyKind::kMarginalOnly;
  return suite;
}

namespace {

// Coverage bookkeeping for every N-subset of classes.
class CoverageTable {
 public:
  CoverageTable(const Ontology& o, int n) : radices_(o.radices()) {
    std::vector<std::size_t> subset(n);
    std::iota(subset.begin(), subset.end(), 0);
    const std::size_t k = radices_.size();
    while (true) {
      std::uint64_t size = 1;
      for (std::size_t c : subset) size *= radices_[c];
      subsets_.push_back(subset);
      covered_.emplace_back(size, 0);
      required_.emplace_back(size, 1);
      // Next combination in lexicographic order.
      int i = n - 1;
      while (i >= 0 && subset[i] == k - n + i) --i;
      if (i < 0) break;
      ++subset[i];
      for (int m = i + 1; m < n; ++m) subset[m] = subset[m - 1] + 1;
    }
    by_class_.assign(k, {});
    for (std::size_t s = 0; s < subsets_.size(); ++s)
      for (std::size_t c : subsets_[s]) by_class_[c].push_back(s);
    RebuildOpen();
  }

  // Only tuples projected from `allowed` stay required.
  void RestrictTo(const Ontology& o, std::span<const std::uint64_t> allowed) {
    for (auto& r : required_) std::fill(r.begin(), r.end(), 0);
    for (std::uint64_t flat : allowed) {
      const auto coords = Decode(o, flat).coords;
      for (std::size_t s = 0; s < subsets_.size(); ++s) required_[s][TupleIndex(s, coords)] = 1;
    }
    RebuildOpen();
  }

  std::size_t subset_count() const { return subsets_.size(); }
  const std::vector<std::size_t>& subset(std::size_t s) const { return subsets_[s]; }
  std::uint64_t uncovered() const { return open_.size(); }

  std::uint64_t TupleIndex(std::size_t s, std::span<const std::uint32_t> coords) const {
    std::uint64_t idx = 0;
    for (std::size_t c : subsets_[s]) idx = idx * radices_[c] + coords[c];
    return idx;
  }

  bool Open(std::size_t s, std::uint64_t t) const { return required_[s][t] && !covered_[s][t]; }

  // Writes the k-th open tuple's values into `coords` and marks its
  // classes in `assigned`.
  void SeedRow(std::uint64_t k, std::vector<std::uint32_t>& coords,
               std::vector<bool>& assigned) const {
    const auto [s, t] = open_[k];
    std::uint64_t rest = t;
    for (std::size_t m = subsets_[s].size(); m-- > 0;) {
      const std::size_t c = subsets_[s][m];
      coords[c] = static_cast<std::uint32_t>(rest % radices_[c]);
      rest /= radices_[c];
      assigned[c] = true;
    }
  }

  // Subsets containing `cls` whose other classes are all assigned.
  void ReadySubsets(const std::vector<bool>& assigned, std::size_t cls,
                    std::vector<std::size_t>& out) const {
    out.clear();
    for (std::size_t s : by_class_[cls]) {
      bool ready = true;
      for (std::size_t c : subsets_[s]) ready = ready && (c == cls || assigned[c]);
      if (ready) out.push_back(s);
    }
  }

  std::uint64_t CountOpen(std::span<const std::size_t> subsets,
                          std::span<const std::uint32_t> coords) const {
    std::uint64_t gain = 0;
    for (std::size_t s : subsets) gain += Open(s, TupleIndex(s, coords));
    return gain;
  }

  std::uint64_t RowGain(std::span<const std::uint32_t> coords) const {
    std::uint64_t gain = 0;
    for (std::size_t s = 0; s < subsets_.size(); ++s) gain += Open(s, TupleIndex(s, coords));
    return gain;
  }

  // Classes that appear in at least one tuple this row newly covers.
  std::vector<bool> Needed(std::span<const std::uint32_t> coords) const {
    std::vector<bool> needed(radices_.size(), false);
    for (std::size_t s = 0; s < subsets_.size(); ++s)
      if (Open(s, TupleIndex(s, coords)))
        for (std::size_t c : subsets_[s]) needed[c] = true;
    return needed;
  }

  void Cover(std::span<const std::uint32_t> coords) {
    for (std::size_t s = 0; s < subsets_.size(); ++s) {
      const std::uint64_t t = TupleIndex(s, coords);
      if (Open(s, t)) {
        // Swap-remove from the open list.
        const std::size_t at = position_[s][t];
        open_[at] = open_.back();
        position_[open_[at].first][open_[at].second] = at;
        open_.pop_back();
      }
      covered_[s][t] = 1;
    }
  }

 private:
  void RebuildOpen() {
    open_.clear();
    position_.assign(subsets_.size(), {});
    for (std::size_t s = 0; s < subsets_.size(); ++s) {
      position_[s].assign(covered_[s].size(), 0);
      for (std::uint64_t t = 0; t < covered_[s].size(); ++t) {
        if (!Open(s, t)) continue;
        position_[s][t] = open_.size();
        open_.emplace_back(s, t);
      }
    }
  }

  std::vector<std::uint32_t> radices_;
  std::vector<std::vector<std::size_t>> subsets_;
  std::vector<std::vector<std::size_t>> by_class_;
  std::vector<std::vector<char>> covered_;
  std::vector<std::vector<char>> required_;
  std::vector<std::pair<std::size_t, std::uint64_t>> open_;
  std::vector<std::vector<std::size_t>> position_;
};

struct CandidateScratch {
  std::vector<bool> assigned;
  std::vector<std::size_t> order;
  std::vector<std::size_t> ready;
};

// Greedy completion of a row seeded from one open tuple.
void BuildCandidate(const CoverageTable& table, const std::vector<std::uint32_t>& radices, Rng& rng,
                    CandidateScratch& scratch, std::vector<std::uint32_t>& coords) {
  const std::size_t class_count = radices.size();
  coords.assign(class_count, 0);
  scratch.assigned.assign(class_count, false);
  table.SeedRow(rng.NextBelow(table.uncovered()), coords, scratch.assigned);

  auto& order = scratch.order;
  order.clear();
  for (std::size_t c = 0; c < class_count; ++c)
    if (!scratch.assigned[c]) order.push_back(c);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.NextBelow(i)]);

  for (std::size_t c : order) {
    table.ReadySubsets(scratch.assigned, c, scratch.ready);
    std::uint64_t best_gain = 0;
    std::uint32_t best = 0;
    std::uint64_t ties = 0;
    for (std::uint32_t v = 0; v < radices[c]; ++v) {
      coords[c] = v;
      const std::uint64_t g = table.CountOpen(scratch.ready, coords);
      if (v == 0 || g > best_gain) {
        best_gain = g;
        best = v;
        ties = 1;
      } else if (g == best_gain && rng.NextBelow(++ties) == 0) {
        best = v;
      }
    }
    coords[c] = best;
    scratch.assigned[c] = true;
  }
}

}  // namespace

TestSuite NwiseSuite(const Ontology& o, int n, std::uint64_t seed, const NwiseOptions& options) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "N must be >= 1");
  if (static_cast<std::size_t>(n) > o.class_count())
    throw Error(ErrorCode::kNTooLarge, "N = " + std::to_string(n) + " exceeds the " +
                                           std::to_string(o.class_count()) + " classes");
  if ((options.exclude_impossible || options.fill_from_joint) && options.joint == nullptr)
    throw Error(ErrorCode::kInvalidArgument, "N-wise exclusion and filling need a joint distribution");

  const std::size_t k = o.class_count();
  const auto& radices = o.radices();
  CoverageTable table(o, n);

  std::vector<double> phi;
  std::vector<std::uint64_t> allowed;
  if (options.joint) {
    phi = options.joint->DenseTable(options.cap);
    if (options.exclude_impossible) {
      for (std::uint64_t f = 0; f < phi.size(); ++f)
        if (phi[f] > 0.0) allowed.push_back(f);
      table.RestrictTo(o, allowed);
    }
  }

  auto FlatOf = [&](std::span<const std::uint32_t> c) {
    std::uint64_t f = 0;
    for (std::size_t i = 0; i < k; ++i) f = f * radices[i] + c[i];
    return f;
  };
  CandidateScratch scratch;
  std::vector<std::uint32_t> coords;

  Rng rng(DeriveSeed(seed, {kStreamNwise}));
  TestSuite suite;
  suite.strategy.kind = StrategyKind::kNwise;
  suite.strategy.n = n;
  suite.master_seed = seed;

  while (table.uncovered() > 0) {
    std::vector<std::uint32_t> best;
    std::uint64_t best_gain = 0;
    for (int cand = 0; cand < std::max(1, options.candidates); ++cand) {
      BuildCandidate(table, radices, rng, scratch, coords);
      if (options.exclude_impossible && phi[FlatOf(coords)] <= 0.0) {
        // Infeasible row: take the allowed partition with the largest gain.
        std::uint64_t top = 0;
        std::vector<std::uint32_t> pick;
        for (std::uint64_t f : allowed) {
          auto c = Decode(o, f).coords;
          const std::uint64_t g = table.RowGain(c);
          if (g > top) {
            top = g;
            pick = std::move(c);
          }
        }
        coords = std::move(pick);
      }
      const std::uint64_t g = coords.empty() ? 0 : table.RowGain(coords);
      if (g > best_gain) {
        best_gain = g;
        std::swap(best, coords);
      }
    }
    if (best_gain == 0) throw Error(ErrorCode::kNonConvergence, "N-wise generator made no progress");

    const std::vector<bool> needed = table.Needed(best);
    std::vector<bool> free(k);
    for (std::size_t c = 0; c < k; ++c) free[c] = !needed[c];

    std::vector<double> trace;
    if (options.fill_from_joint && std::find(free.begin(), free.end(), true) != free.end()) {
      // Conditional of the joint given the needed classes, enumerated over
      // the free classes only.
      std::vector<std::size_t> free_classes;
      std::uint64_t combos = 1;
      for (std::size_t c = 0; c < k; ++c)
        if (free[c]) {
          free_classes.push_back(c);
          combos *= radices[c];
        }
      std::vector<double> mass(combos);
      std::vector<std::uint32_t> probe = best;
      for (std::uint64_t m = 0; m < combos; ++m) {
        std::uint64_t rest = m;
        for (std::size_t q = free_classes.size(); q-- > 0;) {
          probe[free_classes[q]] = static_cast<std::uint32_t>(rest % radices[free_classes[q]]);
          rest /= radices[free_classes[q]];
        }
        mass[m] = phi[FlatOf(probe)];
      }
      const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
      const double u = rng.NextDouble();
      trace.push_back(u);
      if (total > 0.0) {
        std::uint64_t m = 0;
        double acc = 0.0;
        for (std::uint64_t q = 0; q < combos; ++q) {
          if (mass[q] <= 0.0) continue;
          acc += mass[q];
          m = q;
          if (u * total < acc) break;
        }
        for (std::size_t q = free_classes.size(); q-- > 0;) {
          best[free_classes[q]] = static_cast<std::uint32_t>(m % radices[free_classes[q]]);
          m /= radices[free_classes[q]];
        }
      }
    }

    table.Cover(best);
    const std::uint64_t id = suite.cases.size();
    suite.cases.push_back({Encode(o, best), id, std::move(trace), std::move(free)});
  }
  return suite;
}

TestSuite StratifiedSuite(const Ontology& o, const Allocation& allocation, std::uint64_t seed) {
  const std::uint64_t space = o.SpaceSize();
  if (allocation.counts.size() > space)
    throw Error(ErrorCode::kUnknownPartition, "allocation lists more partitions than the space has");
  std::vector<std::uint64_t> flats;
  for (std::uint64_t f = 0; f < allocation.counts.size(); ++f) {
    if (allocation.counts[f] < 0) throw Error(ErrorCode::kInvalidArgument, "negative allocation count");
    flats.insert(flats.end(), static_cast<std::size_t>(allocation.counts[f]), f);
  }
  Rng rng(DeriveSeed(seed, {kStreamStratified}));
  for (std::size_t i = flats.size(); i > 1; --i) std::swap(flats[i - 1], flats[rng.NextBelow(i)]);

  TestSuite suite;
  suite.strategy.kind = StrategyKind::kStratified;
  suite.strategy.allocation = allocation.method;
  suite.master_seed = seed;
  suite.cases.reserve(flats.size());
  for (std::size_t i = 0; i < flats.size(); ++i)
    suite.cases.push_back({Decode(o, flats[i]), i, {}, {}});
  return suite;
}

}  // namespace peon
