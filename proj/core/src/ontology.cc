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

#include "peon/ontology.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <utility>

#include "peon/error.h"

namespace peon {
namespace {

// Orders bounds by position on the extended real line. At equal finite
// value the flags decide: for lower bounds a closed end starts earlier; for
// upper bounds a closed end finishes later.
int ComparePosition(const Bound& a, const Bound& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
  if (!a.finite()) return 0;
  if (a.value < b.value) return -1;
  if (b.value < a.value) return 1;
  return 0;
}

bool LowerBefore(const Bound& a, const Bound& b) {
  int c = ComparePosition(a, b);
  if (c != 0) return c < 0;
  return a.closed && !b.closed;
}

// Larger of two lower bounds (the intersection's lower end).
Bound MaxLower(const Bound& a, const Bound& b) {
  int c = ComparePosition(a, b);
  if (c != 0) return c > 0 ? a : b;
  return a.closed ? b : a;
}

// Smaller of two upper bounds (the intersection's upper end).
Bound MinUpper(const Bound& a, const Bound& b) {
  int c = ComparePosition(a, b);
  if (c != 0) return c < 0 ? a : b;
  return a.closed ? b : a;
}

bool SpanEmpty(const Bound& lo, const Bound& hi) {
  int c = ComparePosition(lo, hi);
  if (c < 0) return false;
  if (c > 0) return true;
  return !(lo.finite() && lo.closed && hi.closed);
}

std::string FormatBound(const Bound& b) {
  switch (b.kind) {
    case Bound::Kind::kNegInf: return "-inf";
    case Bound::Kind::kPosInf: return "inf";
    case Bound::Kind::kFinite: return FormatRational(b.value);
  }
  return {};
}

[[noreturn]] void Throw(ErrorCode code, std::string message) {
  throw Error(code, std::move(message));
}

// True when the union of `ranges` contains every point of `domain`.
bool Covers(std::vector<Interval> ranges, const Interval& domain) {
  std::sort(ranges.begin(), ranges.end(),
            [](const Interval& a, const Interval& b) { return LowerBefore(a.lo, b.lo); });
  // Every point of the domain strictly before `cursor` is covered; the
  // cursor point itself is covered iff `cursor_covered`.
  Bound cursor = domain.lo;
  bool cursor_covered = !domain.lo.finite() || !domain.lo.closed;
  auto done = [&] {
    int c = ComparePosition(cursor, domain.hi);
    if (c > 0) return true;
    if (c < 0) return false;
    if (!cursor.finite()) return true;
    return cursor_covered || !domain.hi.closed;
  };
  while (!done()) {
    bool progressed = false;
    for (const Interval& r : ranges) {
      int lo_vs = ComparePosition(r.lo, cursor);
      bool starts_in_time =
          lo_vs < 0 || (lo_vs == 0 && (r.lo.closed || cursor_covered || !cursor.finite()));
      if (!starts_in_time) continue;
      int hi_vs = ComparePosition(r.hi, cursor);
      if (hi_vs > 0) {
        cursor = r.hi;
        cursor_covered = r.hi.closed;
        progressed = true;
      } else if (hi_vs == 0 && r.hi.closed && !cursor_covered && cursor.finite()) {
        cursor_covered = true;
        progressed = true;
      }
    }
    if (!progressed) return false;
  }
  return true;
}

std::vector<std::uint32_t> RadicesOf(const std::vector<ClassDef>& classes) {
  std::vector<std::uint32_t> radices;
  radices.reserve(classes.size());
  for (const auto& c : classes) radices.push_back(static_cast<std::uint32_t>(c.size()));
  return radices;
}

}  // namespace

bool Interval::Contains(const Rational& x) const {
  if (lo.finite() && (x < lo.value || (x == lo.value && !lo.closed))) return false;
  if (hi.finite() && (x > hi.value || (x == hi.value && !hi.closed))) return false;
  return true;
}

bool Interval::Empty() const { return SpanEmpty(lo, hi); }

bool Interval::Intersects(const Interval& other) const {
  return !SpanEmpty(MaxLower(lo, other.lo), MinUpper(hi, other.hi));
}

std::string Interval::ToString() const {
  std::string s;
  s += lo.closed ? '[' : '(';
  s += FormatBound(lo);
  s += ',';
  s += FormatBound(hi);
  s += hi.closed ? ']' : ')';
  return s;
}

std::optional<std::size_t> ClassDef::FindRange(std::string_view label) const {
  for (std::size_t j = 0; j < ranges.size(); ++j)
    if (ranges[j].label == label) return j;
  return std::nullopt;
}

Ontology::Ontology(std::string version, std::vector<ClassDef> classes)
    : version_(std::move(version)),
      classes_(std::move(classes)),
      radices_(RadicesOf(classes_)) {}

std::uint64_t Ontology::SpaceSize() const {
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 63;
  std::uint64_t product = 1;
  for (std::uint32_t r : radices_) {
    if (product > kLimit / r)
      Throw(ErrorCode::kOverflow, "partition space exceeds 2^63 partitions");
    product *= r;
  }
  return product;
}

std::optional<std::size_t> Ontology::FindClass(std::string_view name) const {
  for (std::size_t i = 0; i < classes_.size(); ++i)
    if (classes_[i].name == name) return i;
  return std::nullopt;
}

std::size_t Ontology::ClassIndex(std::string_view name) const {
  auto i = FindClass(name);
  if (!i) Throw(ErrorCode::kUnknownClass, "unknown class '" + std::string(name) + "'");
  return *i;
}

Ontology ValidateOntology(const OntologySpec& spec) {
  if (spec.classes.empty()) Throw(ErrorCode::kEmptyClass, "ontology declares no classes");

  std::set<std::string, std::less<>> names;
  std::vector<ClassDef> classes;
  classes.reserve(spec.classes.size());

  for (const ClassSpec& cs : spec.classes) {
    const std::string where = "class '" + cs.name + "'";
    if (!names.insert(cs.name).second)
      Throw(ErrorCode::kDuplicateClassName, "duplicate " + where);
    if (cs.ranges.empty()) Throw(ErrorCode::kEmptyClass, where + " has no ranges");

    const bool numeric = std::holds_alternative<Interval>(cs.ranges.front().kind);
    std::set<std::string, std::less<>> labels;
    for (const RangeSpec& r : cs.ranges) {
      if (std::holds_alternative<Interval>(r.kind) != numeric)
        Throw(ErrorCode::kMixedRangeKinds, where + " mixes interval and token ranges");
      if (!labels.insert(r.label).second)
        Throw(ErrorCode::kDuplicateRangeLabel, where + " repeats range label '" + r.label + "'");
      if (numeric && std::get<Interval>(r.kind).Empty())
        Throw(ErrorCode::kInvalidInterval, where + " range '" + r.label + "' is empty");
    }
    if (!numeric) {
      std::set<std::string, std::less<>> tokens;
      for (const RangeSpec& r : cs.ranges)
        if (!tokens.insert(std::get<std::string>(r.kind)).second)
          Throw(ErrorCode::kOverlappingRanges,
                where + " repeats token '" + std::get<std::string>(r.kind) + "'");
    }
    if (cs.domain && cs.domain->Empty())
      Throw(ErrorCode::kInvalidInterval, where + " has an empty domain");

    if (numeric) {
      for (std::size_t a = 0; a < cs.ranges.size(); ++a)
        for (std::size_t b = a + 1; b < cs.ranges.size(); ++b)
          if (std::get<Interval>(cs.ranges[a].kind).Intersects(std::get<Interval>(cs.ranges[b].kind)))
            Throw(ErrorCode::kOverlappingRanges,
                  where + ": ranges '" + cs.ranges[a].label + "' and '" + cs.ranges[b].label +
                      "' intersect");
    }

    // Ranks: all declared or none.
    const auto declared = std::count_if(cs.ranges.begin(), cs.ranges.end(),
                                        [](const RangeSpec& r) { return r.rank.has_value(); });
    const auto n = static_cast<long>(cs.ranges.size());
    std::vector<std::size_t> order(cs.ranges.size());
    std::iota(order.begin(), order.end(), 0);
    bool ordered = true;
    if (declared == n) {
      std::vector<bool> seen(cs.ranges.size(), false);
      for (const RangeSpec& r : cs.ranges) {
        if (*r.rank < 0 || *r.rank >= n || seen[*r.rank])
          Throw(ErrorCode::kInvalidRanks,
                where + " ranks must be a permutation of 0.." + std::to_string(n - 1));
        seen[*r.rank] = true;
      }
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return *cs.ranges[a].rank < *cs.ranges[b].rank;
      });
    } else if (declared != 0) {
      Throw(ErrorCode::kInvalidRanks, where + " declares ranks on only some ranges");
    } else if (numeric) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return LowerBefore(std::get<Interval>(cs.ranges[a].kind).lo,
                           std::get<Interval>(cs.ranges[b].kind).lo);
      });
    } else {
      ordered = false;
    }

    if (cs.covering) {
      if (!numeric) Throw(ErrorCode::kNonCoveringRanges, where + ": only interval classes can be covering");
      std::vector<Interval> intervals;
      for (const RangeSpec& r : cs.ranges) intervals.push_back(std::get<Interval>(r.kind));
      if (!Covers(std::move(intervals), cs.domain.value_or(Interval{})))
        Throw(ErrorCode::kNonCoveringRanges, where + " ranges do not cover its domain");
    }

    ClassDef def;
    def.name = cs.name;
    def.domain = cs.domain;
    def.covering = cs.covering;
    def.ordered = ordered;
    for (std::size_t j = 0; j < order.size(); ++j) {
      const RangeSpec& r = cs.ranges[order[j]];
      def.ranges.push_back(PropertyRange{r.label, r.kind, static_cast<int>(j)});
    }
    classes.push_back(std::move(def));
  }
  return Ontology(spec.version, std::move(classes));
}

std::uint64_t PartitionCount(const Ontology& o, std::uint64_t cap) {
  std::uint64_t count = o.SpaceSize();
  if (count > cap)
    Throw(ErrorCode::kOverflow, std::to_string(count) + " partitions exceed the enumeration cap " +
                                    std::to_string(cap));
  return count;
}

PartitionIndex Encode(const Ontology& o, std::span<const std::uint32_t> coords) {
  const auto& radices = o.radices();
  if (coords.size() != radices.size())
    Throw(ErrorCode::kOutOfRange, "expected " + std::to_string(radices.size()) + " coordinates");
  o.SpaceSize();  // overflow guard
  std::uint64_t flat = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] >= radices[i])
      Throw(ErrorCode::kOutOfRange, "coordinate " + std::to_string(coords[i]) + " of class '" +
                                        o.cls(i).name + "' out of range");
    flat = flat * radices[i] + coords[i];
  }
  return {std::vector<std::uint32_t>(coords.begin(), coords.end()), flat};
}

PartitionIndex Decode(const Ontology& o, std::uint64_t flat) {
  if (flat >= o.SpaceSize())
    Throw(ErrorCode::kOutOfRange, "flat index " + std::to_string(flat) + " out of range");
  const auto& radices = o.radices();
  PartitionIndex p{std::vector<std::uint32_t>(radices.size()), flat};
  for (std::size_t i = radices.size(); i-- > 0;) {
    p.coords[i] = static_cast<std::uint32_t>(flat % radices[i]);
    flat /= radices[i];
  }
  return p;
}

PartitionIndex Classify(const Ontology& o, const Item& item) {
  std::vector<std::uint32_t> coords(o.class_count());
  for (std::size_t i = 0; i < o.class_count(); ++i) {
    const ClassDef& c = o.cls(i);
    auto it = item.find(c.name);
    if (it == item.end()) Throw(ErrorCode::kMissingClass, "item has no value for class '" + c.name + "'");

    std::optional<std::size_t> hit;
    if (c.numeric()) {
      Rational x;
      if (const auto* r = std::get_if<Rational>(&it->second)) {
        x = *r;
      } else {
        x = ParseRational(std::get<std::string>(it->second));
      }
      if (!c.domain || c.domain->Contains(x)) {
        for (std::size_t j = 0; j < c.size(); ++j)
          if (c.ranges[j].interval().Contains(x)) { hit = j; break; }
      }
      if (!hit)
        Throw(ErrorCode::kUnmatchedValue,
              "value " + FormatRational(x) + " of class '" + c.name + "' lies in no range");
    } else {
      const auto* token = std::get_if<std::string>(&it->second);
      if (token) {
        for (std::size_t j = 0; j < c.size(); ++j)
          if (c.ranges[j].token() == *token) { hit = j; break; }
      }
      if (!hit)
        Throw(ErrorCode::kUnmatchedValue, "class '" + c.name + "' has no token matching the item");
    }
    coords[i] = static_cast<std::uint32_t>(*hit);
  }
  return Encode(o, coords);
}

struct RefineAccess {
  static Ontology Make(std::string version, std::vector<ClassDef> classes) {
    return Ontology(std::move(version), std::move(classes));
  }
};

std::vector<std::uint32_t> Refinement::MapCoordinate(std::uint32_t old_coord) const {
  const auto split = static_cast<std::uint32_t>(split_range);
  if (old_coord < split) return {old_coord};
  if (old_coord == split) return {split, split + 1};
  return {old_coord + 1};
}

std::vector<PartitionIndex> Refinement::MapPartition(const PartitionIndex& old_partition) const {
  std::vector<PartitionIndex> out;
  std::vector<std::uint32_t> coords = old_partition.coords;
  for (std::uint32_t c : MapCoordinate(old_partition.coords.at(class_index))) {
    coords[class_index] = c;
    out.push_back(Encode(ontology, coords));
  }
  return out;
}

Refinement Refine(const Ontology& o, std::string_view class_name, std::string_view label,
                  const Rational& split_at) {
  const std::size_t ci = o.ClassIndex(class_name);
  const ClassDef& c = o.cls(ci);
  auto j = c.FindRange(label);
  if (!j) Throw(ErrorCode::kUnknownRange, "class '" + c.name + "' has no range '" + std::string(label) + "'");
  if (!c.ranges[*j].is_interval())
    Throw(ErrorCode::kNotAnInterval, "range '" + std::string(label) + "' is categorical");

  const Interval& old = c.ranges[*j].interval();
  const bool above_lo = !old.lo.finite() || old.lo.value < split_at;
  const bool below_hi = !old.hi.finite() || split_at < old.hi.value;
  if (!above_lo || !below_hi)
    Throw(ErrorCode::kSplitOutsideRange,
          FormatRational(split_at) + " is not strictly inside " + old.ToString());

  Interval lower{old.lo, Bound::At(split_at, false)};
  Interval upper{Bound::At(split_at, true), old.hi};

  ClassDef def = c;
  def.ranges.erase(def.ranges.begin() + static_cast<long>(*j));
  auto lower_label = lower.ToString();
  auto upper_label = upper.ToString();
  for (const auto& r : def.ranges)
    if (r.label == lower_label || r.label == upper_label)
      Throw(ErrorCode::kDuplicateRangeLabel, "refined label collides with '" + r.label + "'");
  def.ranges.insert(def.ranges.begin() + static_cast<long>(*j),
                    {PropertyRange{lower_label, lower, 0}, PropertyRange{upper_label, upper, 0}});
  for (std::size_t k = 0; k < def.ranges.size(); ++k) def.ranges[k].ordinal_rank = static_cast<int>(k);

  std::vector<ClassDef> classes = o.classes();
  classes[ci] = std::move(def);
  return Refinement{RefineAccess::Make(o.version(), std::move(classes)), ci, *j};
}

}  // namespace peon
