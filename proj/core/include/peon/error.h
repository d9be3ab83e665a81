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

#ifndef PEON_ERROR_H_
#define PEON_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace peon {

// Every failure raised by the library carries one of these codes. The
// spelling returned by `ErrorCodeName` is part of the CLI diagnostic format.
enum class ErrorCode {
  // Ontology
  kEmptyClass,
  kDuplicateClassName,
  kOverlappingRanges,
  kNonCoveringRanges,
  kInvalidRanks,
  kMixedRangeKinds,
  kDuplicateRangeLabel,
  kInvalidInterval,
  kOverflow,
  kOutOfRange,
  kUnmatchedValue,
  kMissingClass,
  kUnknownClass,
  kUnknownRange,
  kNotAnInterval,
  kSplitOutsideRange,
  // Probability
  kMissingMarginal,
  kUnnormalized,
  kNegativeProbability,
  kInfeasibleConstraint,
  kDegenerateSet,
  kUnorderedClass,
  kZeroMassCondition,
  kMarginalMismatch,
  kCapExceeded,
  kInvalidGraph,
  kInvalidCoupling,
  // Sampling
  kNTooLarge,
  kUnknownPartition,
  // Statistics
  kEmptyCampaign,
  kInfeasibleTolerance,
  kNonConvergence,
  kInsufficientSample,
  kWeightMismatch,
  kDegenerateClaim,
  kAllPooled,
  kDomainError,
  kInvalidArgument,
  // Simulator
  kInvalidProfile,
  // Documents
  kParseError,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace peon

#endif  // PEON_ERROR_H_
