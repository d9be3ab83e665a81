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

#include <set>

#include "gtest/gtest.h"
#include "peon/error.h"
#include "test_util.h"

namespace peon {
namespace {

using ::peon::testing::LoadData;
using ::peon::testing::OntologyOf;

Interval Closed(const char* lo, const char* hi) {
  return {Bound::At(ParseRational(lo), true), Bound::At(ParseRational(hi), true)};
}

Interval HalfOpen(const char* lo, const char* hi) {
  return {Bound::At(ParseRational(lo), true), Bound::At(ParseRational(hi), false)};
}

ClassSpec Numeric(std::string name, std::vector<Interval> ranges) {
  ClassSpec c;
  c.name = std::move(name);
  for (std::size_t i = 0; i < ranges.size(); ++i)
    c.ranges.push_back({"r" + std::to_string(i), ranges[i], std::nullopt});
  return c;
}

ClassSpec Tokens(std::string name, std::size_t n) {
  ClassSpec c;
  c.name = std::move(name);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string t = "t" + std::to_string(i);
    c.ranges.push_back({t, t, static_cast<int>(i)});
  }
  return c;
}

Ontology Sizes(std::vector<std::size_t> sizes) {
  OntologySpec spec;
  for (std::size_t i = 0; i < sizes.size(); ++i) spec.classes.push_back(Tokens("c" + std::to_string(i), sizes[i]));
  return ValidateOntology(spec);
}

TEST(ValidateOntologyTest, PersonOntologyHasFourHeightRanges) {
  const Peon p = LoadData("person.json");
  const Ontology& o = *p.ontology;
  ASSERT_EQ(o.class_count(), 3u);
  EXPECT_EQ(o.cls(0).name, "sex");
  EXPECT_EQ(o.cls(1).name, "age");
  EXPECT_EQ(o.cls(2).name, "height");
  EXPECT_EQ(o.cls(2).size(), 4u);
  EXPECT_EQ(PartitionCount(o), 32u);
}

TEST(ValidateOntologyTest, RejectsZeroClasses) {
  EXPECT_PEON_ERROR(ValidateOntology(OntologySpec{}), kEmptyClass);
}

TEST(ValidateOntologyTest, RejectsClassWithoutRanges) {
  OntologySpec spec;
  spec.classes.push_back(ClassSpec{"empty", std::nullopt, false, {}});
  EXPECT_PEON_ERROR(ValidateOntology(spec), kEmptyClass);
}

TEST(ValidateOntologyTest, RejectsOverlappingIntervals) {
  OntologySpec spec;
  spec.classes.push_back(Numeric("height", {Closed("0.8", "1.65"), Closed("1.60", "1.8")}));
  EXPECT_PEON_ERROR(ValidateOntology(spec), kOverlappingRanges);
}

TEST(ValidateOntologyTest, RejectsSharedClosedBoundary) {
  OntologySpec spec;
  spec.classes.push_back(Numeric("height", {Closed("0.8", "1.65"), Closed("1.65", "1.8")}));
  EXPECT_PEON_ERROR(ValidateOntology(spec), kOverlappingRanges);
}

TEST(ValidateOntologyTest, AcceptsAdjacentHalfOpenRanges) {
  OntologySpec spec;
  spec.classes.push_back(Numeric("height", {HalfOpen("0.8", "1.65"), Closed("1.65", "1.8")}));
  EXPECT_EQ(ValidateOntology(spec).cls(0).size(), 2u);
}

TEST(ValidateOntologyTest, RejectsDuplicateClassNames) {
  OntologySpec spec;
  spec.classes.push_back(Tokens("a", 2));
  spec.classes.push_back(Tokens("a", 3));
  EXPECT_PEON_ERROR(ValidateOntology(spec), kDuplicateClassName);
}

TEST(ValidateOntologyTest, RejectsGapInCoveringClass) {
  OntologySpec spec;
  ClassSpec c = Numeric("x", {HalfOpen("0", "1"), {Bound::At(1, false), Bound::At(2, true)}});
  c.domain = Closed("0", "2");
  c.covering = true;
  spec.classes.push_back(c);
  EXPECT_PEON_ERROR(ValidateOntology(spec), kNonCoveringRanges);
  spec.classes[0].ranges[1].kind = Closed("1", "2");
  EXPECT_NO_THROW(ValidateOntology(spec));
}

TEST(ValidateOntologyTest, RejectsGappedRanks) {
  OntologySpec spec;
  spec.classes.push_back(Tokens("a", 2));
  spec.classes[0].ranges[1].rank = 2;
  EXPECT_PEON_ERROR(ValidateOntology(spec), kInvalidRanks);
}

TEST(ValidateOntologyTest, NumericRangesAreSortedByLowerBound) {
  OntologySpec spec;
  spec.classes.push_back(Numeric("h", {Closed("2", "3"), HalfOpen("0", "1")}));
  const Ontology o = ValidateOntology(spec);
  EXPECT_EQ(o.cls(0).ranges[0].label, "r1");
  EXPECT_EQ(o.cls(0).ranges[1].ordinal_rank, 1);
}

TEST(ValidateOntologyTest, CategoricalWithoutRanksIsUnordered) {
  const auto o = OntologyOf(R"({"classes": [{"name": "sex", "ranges": [{"label": "f"}, {"label": "m"}]}]})");
  EXPECT_FALSE(o->cls(0).ordered);
}

TEST(PartitionCountTest, SingleClass) { EXPECT_EQ(PartitionCount(Sizes({4})), 4u); }

TEST(PartitionCountTest, ProductRule) { EXPECT_EQ(PartitionCount(Sizes({2, 4, 4})), 32u); }

TEST(PartitionCountTest, OverflowBeyondCap) {
  EXPECT_PEON_ERROR(PartitionCount(Sizes({10, 10, 10, 10, 10, 10, 10}), 1'000'000), kOverflow);
}

TEST(EncodeTest, ZeroAndMaximalTuples) {
  const Ontology o = Sizes({2, 4, 4});
  const std::vector<std::uint32_t> zero{0, 0, 0};
  const std::vector<std::uint32_t> top{1, 3, 3};
  EXPECT_EQ(Encode(o, zero).flat, 0u);
  EXPECT_EQ(Encode(o, top).flat, 31u);
}

TEST(EncodeTest, RoundTripAndLexicographicOrder) {
  const Ontology o = Sizes({2, 4, 4});
  std::vector<std::uint32_t> previous;
  for (std::uint64_t f = 0; f < 32; ++f) {
    const PartitionIndex p = Decode(o, f);
    EXPECT_EQ(Encode(o, p.coords).flat, f);
    if (f > 0) {
      EXPECT_TRUE(std::lexicographical_compare(previous.begin(), previous.end(), p.coords.begin(),
                                               p.coords.end()));
    }
    previous = p.coords;
  }
  // Hand-computed: 17 = 1*16 + 0*4 + 1.
  EXPECT_EQ(Decode(o, 17).coords, (std::vector<std::uint32_t>{1, 0, 1}));
}

TEST(EncodeTest, OutOfRange) {
  const Ontology o = Sizes({2, 4, 4});
  const std::vector<std::uint32_t> bad{2, 0, 0};
  EXPECT_PEON_ERROR(Encode(o, bad), kOutOfRange);
  EXPECT_PEON_ERROR(Decode(o, 32), kOutOfRange);
}

Item PersonItem(const char* sex, const char* age, const char* height) {
  return {{"sex", std::string(sex)}, {"age", ParseRational(age)}, {"height", ParseRational(height)}};
}

TEST(ClassifyTest, TeenagerOfOneSixty) {
  const Peon p = LoadData("person.json");
  const PartitionIndex idx = Classify(*p.ontology, PersonItem("female", "15", "1.60"));
  EXPECT_EQ(idx.coords, (std::vector<std::uint32_t>{0, 1, 1}));
  EXPECT_EQ(p.ontology->cls(2).ranges[idx.coords[2]].label, "[0.8,1.65)");
}

TEST(ClassifyTest, ClosedBoundaryBelongsToOneRange) {
  const Peon p = LoadData("person.json");
  EXPECT_EQ(Classify(*p.ontology, PersonItem("male", "40", "1.65")).coords[2], 2u);
  EXPECT_EQ(Classify(*p.ontology, PersonItem("male", "40", "1.8")).coords[2], 2u);
  EXPECT_EQ(Classify(*p.ontology, PersonItem("male", "18", "1.81")).coords, (std::vector<std::uint32_t>{1, 2, 3}));
}

TEST(ClassifyTest, OutsideDomainIsUnmatched) {
  const Peon p = LoadData("person.json");
  EXPECT_PEON_ERROR(Classify(*p.ontology, PersonItem("male", "40", "2.5")), kUnmatchedValue);
  EXPECT_PEON_ERROR(Classify(*p.ontology, PersonItem("other", "40", "1.7")), kUnmatchedValue);
}

TEST(ClassifyTest, MissingClass) {
  const Peon p = LoadData("person.json");
  Item item = PersonItem("male", "40", "1.7");
  item.erase("age");
  EXPECT_PEON_ERROR(Classify(*p.ontology, item), kMissingClass);
}

TEST(ClassifyTest, GridSweepHitsEveryPartitionExactlyOnce) {
  const Peon p = LoadData("person.json");
  const Ontology& o = *p.ontology;
  std::set<std::uint64_t> seen;
  for (const char* sex : {"female", "male"})
    for (int age = 0; age <= 120; age += 1)
      for (int cm = 0; cm <= 220; cm += 1) {
        const Rational h(cm, 100);
        Item item{{"sex", std::string(sex)}, {"age", Rational(age)}, {"height", h}};
        const PartitionIndex idx = Classify(o, item);
        // Independent oracle: count ranges that contain the value.
        int hits = 0;
        for (const auto& r : o.cls(2).ranges) hits += r.interval().Contains(h);
        EXPECT_EQ(hits, 1);
        seen.insert(idx.flat);
      }
  EXPECT_EQ(seen.size(), PartitionCount(o));
}

TEST(RefineTest, SplitHeightGivesFiveRanges) {
  const Peon p = LoadData("person.json");
  const Refinement r = Refine(*p.ontology, "height", "[1.65,1.8]", ParseRational("1.72"));
  EXPECT_EQ(r.ontology.cls(2).size(), 5u);
  EXPECT_EQ(r.ontology.cls(2).ranges[2].label, "[1.65,1.72)");
  EXPECT_EQ(r.ontology.cls(2).ranges[3].label, "[1.72,1.8]");
  for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(r.ontology.cls(2).ranges[k].ordinal_rank, static_cast<int>(k));
  EXPECT_EQ(PartitionCount(r.ontology), 40u);
}

TEST(RefineTest, SplitAtEndpointIsOutside) {
  const Peon p = LoadData("person.json");
  EXPECT_PEON_ERROR(Refine(*p.ontology, "height", "[1.65,1.8]", ParseRational("1.65")), kSplitOutsideRange);
  EXPECT_PEON_ERROR(Refine(*p.ontology, "height", "[1.65,1.8]", ParseRational("1.9")), kSplitOutsideRange);
}

TEST(RefineTest, CategoricalRangeIsNotAnInterval) {
  const Peon p = LoadData("person.json");
  EXPECT_PEON_ERROR(Refine(*p.ontology, "sex", "male", 1), kNotAnInterval);
}

TEST(RefineTest, ClassificationCommutesWithMapping) {
  const Peon p = LoadData("person.json");
  const Ontology& o = *p.ontology;
  const Refinement r = Refine(o, "height", "[1.65,1.8]", ParseRational("1.72"));
  for (const char* sex : {"female", "male"})
    for (int age = 0; age <= 120; age += 3)
      for (int cm = 0; cm <= 220; cm += 1) {
        Item item{{"sex", std::string(sex)}, {"age", Rational(age)}, {"height", Rational(cm, 100)}};
        const auto image = r.MapPartition(Classify(o, item));
        const PartitionIndex fresh = Classify(r.ontology, item);
        EXPECT_NE(std::find(image.begin(), image.end(), fresh), image.end()) << cm;
      }
}

}  // namespace
}  // namespace peon
