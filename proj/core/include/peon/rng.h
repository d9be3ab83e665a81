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

#ifndef PEON_RNG_H_
#define PEON_RNG_H_

#include <cstdint>
#include <initializer_list>

namespace peon {

// SplitMix64 step. Used to expand seeds and to derive independent streams.
std::uint64_t SplitMix64(std::uint64_t& state);

// Hashes a master seed together with stream coordinates (replication index,
// case id, strategy tag, ...) into a fresh 64-bit seed.
std::uint64_t DeriveSeed(std::uint64_t master,
                         std::initializer_list<std::uint64_t> path);

// xoshiro256** 1.0 (Blackman & Vigna), seeded through SplitMix64. The output
// sequence for a given seed is fixed on every platform; nothing here goes
// through <random> distributions, whose algorithms are implementation
// defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t NextU64();

  // Uniform in [0, 1) with 53 bits: (NextU64() >> 11) * 2^-53.
  double NextDouble();

  // Uniform integer in [0, bound) by Lemire's multiply-shift with
  // rejection. bound must be > 0.
  std::uint64_t NextBelow(std::uint64_t bound);

  bool Bernoulli(double p) { return NextDouble() < p; }

  // Standard normal via Marsaglia's polar method (two uniforms per try).
  double NextNormal();

 private:
  std::uint64_t s_[4];
};

}  // namespace peon

#endif  // PEON_RNG_H_
