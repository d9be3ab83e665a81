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

#ifndef PEON_RATIONAL_H_
#define PEON_RATIONAL_H_

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace peon {

// Arbitrary-precision rational used for interval bounds and for exact
// probability arithmetic when the inputs were given as decimal strings.
using Rational = boost::multiprecision::cpp_rational;

// Parses "1.65", "-2", "1e-3", "3.5E2" or "1/3" without going through a
// binary float. Throws Error(kParseError) on anything else.
Rational ParseRational(std::string_view text);

// Shortest exact text for `value`: a terminating decimal when the
// denominator only has factors 2 and 5, otherwise "p/q".
std::string FormatRational(const Rational& value);

double ToDouble(const Rational& value);

}  // namespace peon

#endif  // PEON_RATIONAL_H_
