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

#ifndef PEON_IO_H_
#define PEON_IO_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peon/ontology.h"
#include "peon/probability.h"
#include "peon/sampling.h"
#include "peon/simulator.h"
#include "peon/statistics.h"

namespace peon {

// An ontology document, optionally extended with marginals and
// dependencies (or a dense joint).
struct Peon {
  std::shared_ptr<const Ontology> ontology;
  std::optional<JointDistribution> joint;

  // Errors: MissingMarginal when the document carries no distribution.
  const JointDistribution& RequireJoint() const;
};

// Errors: ParseError for malformed documents; validation errors from the
// ontology and probability layers otherwise.
Peon ParsePeon(std::string_view json_text);
Peon LoadPeon(const std::string& path);

std::string ReadFile(const std::string& path);

// One JSON object per line: {"id", "flat", "coords", "labels"} and, for
// N-wise suites, "free".
void WriteSuiteJsonl(std::ostream& out, const Ontology& o, const TestSuite& suite);
// id,flat,<class>... with range labels.
void WriteSuiteCsv(std::ostream& out, const Ontology& o, const TestSuite& suite);
// Accepts the JSONL form. Errors: ParseError, UnknownPartition.
TestSuite ReadSuiteJsonl(std::istream& in, const Ontology& o);

// flat_partition,executed,failed
void WriteCampaignCsv(std::ostream& out, const CampaignResult& r);
CampaignResult ReadCampaignCsv(std::istream& in);

std::string PlanToJson(const TestPlan& plan);
TestPlan PlanFromJson(std::string_view json_text);

std::string ClaimReportToJson(const ClaimReport& report, const TestPlan& plan,
                              const std::optional<StratifiedEstimate>& stratified);

std::string AllocationToJson(const Allocation& a);
Allocation AllocationFromJson(std::string_view json_text);
void WriteAllocationCsv(std::ostream& out, const Allocation& a);

std::string BalanceToJson(const BalanceResult& b, const std::optional<MannWhitneyResult>& rank,
                          const std::string& rank_class);
std::string UniformityToJson(const UniformityReport& r);

// {"profile": "uniform", "p"} | {"profile": "skewed", "p_hot", "p_cold",
// "hotspots" | "hot_mass"} | {"profile": "random", "alpha", "beta", "seed"}
// | {"profile": "explicit", "failure": [p per partition]}
SutProfile SutProfileFromJson(std::string_view json_text);

struct ExperimentSpec {
  SutProfile sut;
  std::vector<Strategy> strategies;
  std::int64_t suite_size = 2000;
  int replications = 500;
  std::uint64_t seed = 0;
  ComparisonOptions options;
};

// {"sut": {...}, "strategies": [...], "suite_size", "replications", "seed",
// "nwise_fill", "exclude_impossible"}
ExperimentSpec ExperimentFromJson(std::string_view json_text);
std::string ExperimentReportToJson(const ExperimentReport& r);
void WriteExperimentReportCsv(std::ostream& out, const ExperimentReport& r);

// Materialized phi per partition with labels.
std::string DescribeJson(const Peon& peon, std::uint64_t cap);
void WriteDescribeCsv(std::ostream& out, const Peon& peon, std::uint64_t cap);

}  // namespace peon

#endif  // PEON_IO_H_
