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

#ifndef PEON_NUMERICS_H_
#define PEON_NUMERICS_H_

#include <cstdint>

namespace peon {

// Inverse standard normal CDF, Wichura's AS241 (PPND16), ~1e-16 relative.
// Errors: DomainError unless 0 < p < 1.
double NormalQuantile(double p);

double NormalCdf(double x);
// Upper tail 1 - NormalCdf(x) without cancellation.
double NormalSf(double x);

// log P(X = k), X ~ Binomial(n, p), via Loader's saddle-point expansion
// (Stirling remainders plus deviance terms). -inf outside the support.
double BinomialLogPmf(std::int64_t k, std::int64_t n, double p);
double BinomialPmf(std::int64_t k, std::int64_t n, double p);

// P(X <= k) and P(X > k), each summed directly over its own tail so that
// small tails keep full relative accuracy.
// Errors: DomainError unless 0 <= p <= 1 and n >= 0.
double BinomialCdf(std::int64_t k, std::int64_t n, double p);
double BinomialSf(std::int64_t k, std::int64_t n, double p);

// P(chi^2_dof > x).
double ChiSquaredSf(double x, double dof);

}  // namespace peon

#endif  // PEON_NUMERICS_H_
