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

#include "benchmark/benchmark.h"
#include "peon/io.h"
#include "peon/sampling.h"

namespace peon {
namespace {

const Peon& Reference() {
  static const Peon p = LoadPeon(std::string(PEON_DATA_DIR) + "/reference_peon.json");
  return p;
}

void BM_SampleAbstract(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(SampleAbstract(Reference().RequireJoint(), state.range(0), ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleAbstract)->Arg(1000)->Arg(10000);

void BM_SampleAbstractDense(benchmark::State& state) {
  const JointDistribution dense = Reference().RequireJoint().Materialize();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(SampleAbstract(dense, state.range(0), ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleAbstractDense)->Arg(10000);

void BM_NwiseSuite(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(NwiseSuite(*Reference().ontology, static_cast<int>(state.range(0)), ++seed));
}
BENCHMARK(BM_NwiseSuite)->DenseRange(2, 4);

void BM_NwiseSuiteFilled(benchmark::State& state) {
  NwiseOptions opt;
  opt.fill_from_joint = true;
  opt.joint = &Reference().RequireJoint();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(NwiseSuite(*Reference().ontology, 3, ++seed, opt));
}
BENCHMARK(BM_NwiseSuiteFilled);

}  // namespace
}  // namespace peon
