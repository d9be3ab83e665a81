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

#include <memory>
#include <vector>

#include "benchmark/benchmark.h"
#include "peon/io.h"
#include "peon/probability.h"
#include "peon/rng.h"

namespace peon {
namespace {

std::vector<double> Simplex(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  double s = 0;
  for (double& x : v) s += (x = rng.NextDouble() + 1e-3);
  for (double& x : v) x /= s;
  return v;
}

void BM_BooleanCoupling(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const Marginal px = Marginal::FromDoubles("x", Simplex(rng, n));
  const Marginal py = Marginal::FromDoubles("y", Simplex(rng, n));
  std::vector<std::uint32_t> i{0}, j;
  for (std::uint32_t y = 0; y < n; ++y) j.push_back(y);
  for (auto _ : state) benchmark::DoNotOptimize(BooleanConstraintCoupling(px, py, i, j));
}
BENCHMARK(BM_BooleanCoupling)->Range(4, 256);

void BM_ComonotoneTable(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  const auto px = Simplex(rng, n), py = Simplex(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(ComonotoneTable(px, py));
}
BENCHMARK(BM_ComonotoneTable)->Range(4, 256);

void BM_DenseTableReference(benchmark::State& state) {
  const Peon p = LoadPeon(std::string(PEON_DATA_DIR) + "/reference_peon.json");
  for (auto _ : state) benchmark::DoNotOptimize(p.RequireJoint().DenseTable());
}
BENCHMARK(BM_DenseTableReference);

void BM_LoadReferencePeon(benchmark::State& state) {
  const std::string text = ReadFile(std::string(PEON_DATA_DIR) + "/reference_peon.json");
  for (auto _ : state) benchmark::DoNotOptimize(ParsePeon(text));
}
BENCHMARK(BM_LoadReferencePeon);

}  // namespace
}  // namespace peon
