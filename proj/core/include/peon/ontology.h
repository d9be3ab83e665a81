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

#ifndef PEON_ONTOLOGY_H_
#define PEON_ONTOLOGY_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "peon/rational.h"

namespace peon {

// Default limit on |partition space| for anything that enumerates it.
inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

// One end of an interval. Infinite ends are never closed.
struct Bound {
  enum class Kind { kNegInf, kFinite, kPosInf };

  Kind kind = Kind::kFinite;
  Rational value;
  bool closed = false;

  static Bound NegInf() { return {Kind::kNegInf, 0, false}; }
  static Bound PosInf() { return {Kind::kPosInf, 0, false}; }
  static Bound At(Rational v, bool closed) {
    return {Kind::kFinite, std::move(v), closed};
  }
  bool finite() const { return kind == Kind::kFinite; }
};

struct Interval {
  Bound lo = Bound::NegInf();
  Bound hi = Bound::PosInf();

  bool Contains(const Rational& x) const;
  bool Empty() const;
  bool Intersects(const Interval& other) const;
  // "[0.8,1.65)", "(-inf,0.8)", "(1.8,inf)".
  std::string ToString() const;
};

struct PropertyRange {
  std::string label;
  std::variant<Interval, std::string> kind;  // interval or categorical token
  int ordinal_rank = 0;

  bool is_interval() const { return std::holds_alternative<Interval>(kind); }
  const Interval& interval() const { return std::get<Interval>(kind); }
  const std::string& token() const { return std::get<std::string>(kind); }
};

// A validated class. `ranges` is in canonical order: ranges[j].ordinal_rank
// == j, so partition coordinates are ordinal ranks.
struct ClassDef {
  std::string name;
  std::vector<PropertyRange> ranges;
  std::optional<Interval> domain;
  bool covering = false;
  // False for categorical classes whose document declared no ranks; such a
  // class has declaration order only and cannot carry a monotone coupling.
  bool ordered = true;

  std::size_t size() const { return ranges.size(); }
  bool numeric() const { return ranges.front().is_interval(); }
  std::optional<std::size_t> FindRange(std::string_view label) const;
};

// Unvalidated input, as read from an ontology document.
struct RangeSpec {
  std::string label;
  std::variant<Interval, std::string> kind;
  std::optional<int> rank;
};

struct ClassSpec {
  std::string name;
  std::optional<Interval> domain;
  bool covering = false;
  std::vector<RangeSpec> ranges;
};

struct OntologySpec {
  std::string version;
  std::vector<ClassSpec> classes;
};

// Immutable once built; only ValidateOntology and Refine construct one.
class Ontology {
 public:
  const std::string& version() const { return version_; }
  const std::vector<ClassDef>& classes() const { return classes_; }
  const ClassDef& cls(std::size_t i) const { return classes_[i]; }
  std::size_t class_count() const { return classes_.size(); }
  // Range counts in class order (the mixed-radix digits).
  const std::vector<std::uint32_t>& radices() const { return radices_; }
  // Product of the radices; throws Overflow beyond 2^63.
  std::uint64_t SpaceSize() const;

  std::optional<std::size_t> FindClass(std::string_view name) const;
  // Like FindClass but throws UnknownClass.
  std::size_t ClassIndex(std::string_view name) const;

 private:
  friend Ontology ValidateOntology(const OntologySpec& spec);
  friend struct RefineAccess;

  Ontology(std::string version, std::vector<ClassDef> classes);

  std::string version_;
  std::vector<ClassDef> classes_;
  std::vector<std::uint32_t> radices_;
};

struct PartitionIndex {
  std::vector<std::uint32_t> coords;
  std::uint64_t flat = 0;

  friend bool operator==(const PartitionIndex&, const PartitionIndex&) = default;
};

// Errors: EmptyClass, DuplicateClassName, DuplicateRangeLabel,
// OverlappingRanges, NonCoveringRanges, InvalidRanks, MixedRangeKinds,
// InvalidInterval.
Ontology ValidateOntology(const OntologySpec& spec);

// Number of partitions; Overflow when it exceeds `cap`.
std::uint64_t PartitionCount(const Ontology& o,
                             std::uint64_t cap = kDefaultEnumerationCap);

// Mixed-radix with the first class as the most significant digit, so
// lexicographic order of coordinates is numeric order of `flat`.
PartitionIndex Encode(const Ontology& o, std::span<const std::uint32_t> coords);
PartitionIndex Decode(const Ontology& o, std::uint64_t flat);

using ItemValue = std::variant<Rational, std::string>;
using Item = std::map<std::string, ItemValue, std::less<>>;

// Errors: MissingClass, UnmatchedValue.
PartitionIndex Classify(const Ontology& o, const Item& item);

// Result of splitting one interval range in two.
struct Refinement {
  Ontology ontology;
  std::size_t class_index = 0;
  std::size_t split_range = 0;  // old coordinate that was split

  // Old coordinate of the refined class -> new coordinates it became.
  std::vector<std::uint32_t> MapCoordinate(std::uint32_t old_coord) const;
  // Every new partition contained in `old_partition`.
  std::vector<PartitionIndex> MapPartition(
      const PartitionIndex& old_partition) const;
};

// Splits `label` of class `class_name` at `split_at` into a lower half that
// is open at `split_at` and an upper half that is closed there.
// Errors: UnknownClass, UnknownRange, NotAnInterval, SplitOutsideRange.
Refinement Refine(const Ontology& o, std::string_view class_name,
                  std::string_view label, const Rational& split_at);

}  // namespace peon

#endif  // PEON_ONTOLOGY_H_
