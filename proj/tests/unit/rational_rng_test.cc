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

#include <cmath>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "peon/error.h"
#include "peon/rational.h"
#include "peon/rng.h"
#include "test_util.h"

namespace peon {
namespace {

TEST(ParseRationalTest, Decimals) {
  EXPECT_EQ(ParseRational("1.65"), Rational(33, 20));
  EXPECT_EQ(ParseRational("-0.5"), Rational(-1, 2));
  EXPECT_EQ(ParseRational("  12 "), Rational(12));
  EXPECT_EQ(ParseRational(".25"), Rational(1, 4));
}

TEST(ParseRationalTest, FractionsAndExponents) {
  EXPECT_EQ(ParseRational("3/9"), Rational(1, 3));
  EXPECT_EQ(ParseRational("1e-3"), Rational(1, 1000));
  EXPECT_EQ(ParseRational("2.5E2"), Rational(250));
}

TEST(ParseRationalTest, ZeroIsExact) {
  // 0.1 + 0.2 == 0.3 only in exact arithmetic.
  EXPECT_EQ(ParseRational("0.1") + ParseRational("0.2"), ParseRational("0.3"));
}

TEST(ParseRationalTest, Malformed) {
  for (const char* bad : {"", "abc", "1/0", "1.2.3", "--1", "1e", "1/"}) {
    EXPECT_PEON_ERROR(ParseRational(bad), kParseError);
  }
}

TEST(FormatRationalTest, TerminatingDecimals) {
  EXPECT_EQ(FormatRational(Rational(33, 20)), "1.65");
  EXPECT_EQ(FormatRational(Rational(-1, 8)), "-0.125");
  EXPECT_EQ(FormatRational(Rational(7)), "7");
}

TEST(FormatRationalTest, NonTerminatingUsesFraction) {
  EXPECT_EQ(FormatRational(Rational(1, 3)), "1/3");
}

TEST(FormatRationalTest, RoundTrip) {
  for (const char* text : {"0.05", "1.8", "-3/7", "120", "0.0001"})
    EXPECT_EQ(ParseRational(FormatRational(ParseRational(text))), ParseRational(text));
}

TEST(SplitMix64Test, PublishedFirstOutputForZeroSeed) {
  std::uint64_t state = 0;
  EXPECT_EQ(SplitMix64(state), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(SplitMix64(state), 0x6e789e6aa1b965f4ULL);
}

TEST(RngTest, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.NextU64();
    EXPECT_EQ(x, b.NextU64());
    differs |= x != c.NextU64();
  }
  EXPECT_TRUE(differs);
}

TEST(RngTest, DeriveSeedIsPathSensitive) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t a = 0; a < 20; ++a)
    for (std::uint64_t b = 0; b < 20; ++b) seeds.insert(DeriveSeed(7, {a, b}));
  EXPECT_EQ(seeds.size(), 400u);
  EXPECT_NE(DeriveSeed(7, {1, 2}), DeriveSeed(7, {2, 1}));
  EXPECT_NE(DeriveSeed(7, {1}), DeriveSeed(8, {1}));
  EXPECT_EQ(DeriveSeed(7, {1, 2}), DeriveSeed(7, {1, 2}));
}

TEST(RngTest, NextDoubleInUnitInterval) {
  Rng rng(1);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.NextDouble();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // sd of the mean is sqrt(1/12/n) ~ 6.5e-4
  EXPECT_NEAR(sum / n, 0.5, 0.004);
}

TEST(RngTest, NextBelowIsUniform) {
  Rng rng(3);
  const int k = 7;
  const int n = 70000;
  std::vector<int> counts(k, 0);
  for (int i = 0; i < n; ++i) ++counts[rng.NextBelow(k)];
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - n / k) * (c - n / k) / double(n / k);
  // 6 dof, 0.999 quantile is 22.46.
  EXPECT_LT(chi2, 22.46);
}

TEST(RngTest, NextBelowOne) {
  Rng rng(9);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(rng.NextBelow(1), 0u);
}

TEST(RngTest, NormalMoments) {
  Rng rng(5);
  const int n = 200000;
  double s1 = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.NextNormal();
    s1 += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s1 / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.015);
}

}  // namespace
}  // namespace peon
