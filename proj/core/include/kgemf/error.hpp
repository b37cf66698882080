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

#ifndef KGEMF_ERROR_HPP_
#define KGEMF_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace kgemf {

enum class ErrorCode {
  kInvalidArgument,
  kEmptyDataset,
  kMalformedLine,
  kInfeasibleSplit,
  kAlreadyAugmented,
  kIdOutOfRange,
  kInverseNotAvailable,
  kNonFiniteUpstream,
  kShapeMismatch,
  kLabelOutOfRange,
  kIndexOutOfRange,
  kTooFewEntities,
  kLossDiverged,
  kIncompatibleLoss,
  kNonFiniteGradient,
  kEmptyInput,
  kDegenerateLabels,
  kInfiniteDimension,
  kAllTrialsFailed,
  kNoFeasibleBatch,
  kUnknownEntity,
  kInvalidConfig,
  kIncompatibleComposition,
  kIo,
  kCorruptCheckpoint,
};

std::string_view error_code_name(ErrorCode code);

// All library failures surface as this exception type; `code()` carries the
// category so callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kgemf

#endif  // KGEMF_ERROR_HPP_
