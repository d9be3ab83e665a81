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

#include "peon/error.h"

namespace peon {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyClass: return "EmptyClass";
    case ErrorCode::kDuplicateClassName: return "DuplicateClassName";
    case ErrorCode::kOverlappingRanges: return "OverlappingRanges";
    case ErrorCode::kNonCoveringRanges: return "NonCoveringRanges";
    case ErrorCode::kInvalidRanks: return "InvalidRanks";
    case ErrorCode::kMixedRangeKinds: return "MixedRangeKinds";
    case ErrorCode::kDuplicateRangeLabel: return "DuplicateRangeLabel";
    case ErrorCode::kInvalidInterval: return "InvalidInterval";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kUnmatchedValue: return "UnmatchedValue";
    case ErrorCode::kMissingClass: return "MissingClass";
    case ErrorCode::kUnknownClass: return "UnknownClass";
    case ErrorCode::kUnknownRange: return "UnknownRange";
    case ErrorCode::kNotAnInterval: return "NotAnInterval";
    case ErrorCode::kSplitOutsideRange: return "SplitOutsideRange";
    case ErrorCode::kMissingMarginal: return "MissingMarginal";
    case ErrorCode::kUnnormalized: return "Unnormalized";
    case ErrorCode::kNegativeProbability: return "NegativeProbability";
    case ErrorCode::kInfeasibleConstraint: return "InfeasibleConstraint";
    case ErrorCode::kDegenerateSet: return "DegenerateSet";
    case ErrorCode::kUnorderedClass: return "UnorderedClass";
    case ErrorCode::kZeroMassCondition: return "ZeroMassCondition";
    case ErrorCode::kMarginalMismatch: return "MarginalMismatch";
    case ErrorCode::kCapExceeded: return "CapExceeded";
    case ErrorCode::kInvalidGraph: return "InvalidGraph";
    case ErrorCode::kInvalidCoupling: return "InvalidCoupling";
    case ErrorCode::kNTooLarge: return "NTooLarge";
    case ErrorCode::kUnknownPartition: return "UnknownPartition";
    case ErrorCode::kEmptyCampaign: return "EmptyCampaign";
    case ErrorCode::kInfeasibleTolerance: return "InfeasibleTolerance";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kInsufficientSample: return "InsufficientSample";
    case ErrorCode::kWeightMismatch: return "WeightMismatch";
    case ErrorCode::kDegenerateClaim: return "DegenerateClaim";
    case ErrorCode::kAllPooled: return "AllPooled";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidProfile: return "InvalidProfile";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace peon
