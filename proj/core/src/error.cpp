// Copyright 2026 The kgemf Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kgemf/error.hpp"

namespace kgemf {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kInfeasibleSplit: return "InfeasibleSplit";
    case ErrorCode::kAlreadyAugmented: return "AlreadyAugmented";
    case ErrorCode::kIdOutOfRange: return "IdOutOfRange";
    case ErrorCode::kInverseNotAvailable: return "InverseNotAvailable";
    case ErrorCode::kNonFiniteUpstream: return "NonFiniteUpstream";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kLabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kTooFewEntities: return "TooFewEntities";
    case ErrorCode::kLossDiverged: return "LossDiverged";
    case ErrorCode::kIncompatibleLoss: return "IncompatibleLoss";
    case ErrorCode::kNonFiniteGradient: return "NonFiniteGradient";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kDegenerateLabels: return "DegenerateLabels";
    case ErrorCode::kInfiniteDimension: return "InfiniteDimension";
    case ErrorCode::kAllTrialsFailed: return "AllTrialsFailed";
    case ErrorCode::kNoFeasibleBatch: return "NoFeasibleBatch";
    case ErrorCode::kUnknownEntity: return "UnknownEntity";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIncompatibleComposition: return "IncompatibleComposition";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kCorruptCheckpoint: return "CorruptCheckpoint";
  }
  return "Unknown";
}

}  // namespace kgemf
