// Copyright 2026 The sflgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sflgame/error.h"

namespace sflgame {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonPositiveCost: return "NonPositiveCost";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kDegenerateFit: return "DegenerateFit";
    case ErrorCode::kNonPositiveSample: return "NonPositiveSample";
    case ErrorCode::kZeroAggregate: return "ZeroAggregate";
    case ErrorCode::kNoParticipation: return "NoParticipation";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kNonInteriorRegime: return "NonInteriorRegime";
    case ErrorCode::kInfeasibleBox: return "InfeasibleBox";
    case ErrorCode::kNonPositiveWelfare: return "NonPositiveWelfare";
    case ErrorCode::kNotTabulated: return "NotTabulated";
    case ErrorCode::kNoQualifyingCut: return "NoQualifyingCut";
  }
  return "Unknown";
}

}  // namespace sflgame
