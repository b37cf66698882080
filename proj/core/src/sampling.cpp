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

#include "kgemf/sampling.hpp"

#include <string>

#include "kgemf/error.hpp"

namespace kgemf {

std::string_view corruption_mode_name(CorruptionMode mode) {
  switch (mode) {
    case CorruptionMode::kHead: return "head";
    case CorruptionMode::kTail: return "tail";
    case CorruptionMode::kBoth: return "both";
  }
  return "both";
}

CorruptionMode parse_corruption_mode(std::string_view name) {
  if (name == "head") return CorruptionMode::kHead;
  if (name == "tail") return CorruptionMode::kTail;
  if (name == "both") return CorruptionMode::kBoth;
  throw Error(ErrorCode::kInvalidArgument, "unknown corruption mode '" + std::string(name) + "'");
}

UniformNegativeSampler::UniformNegativeSampler(std::size_t num_entities, CorruptionMode mode)
    : num_entities_(num_entities), mode_(mode) {
  if (num_entities < 2) {
    throw Error(ErrorCode::kTooFewEntities, "negative sampling needs at least 2 entities");
  }
}

NegativeBatch UniformNegativeSampler::sample(std::span<const Triple> positives, std::size_t k,
                                             std::mt19937_64& rng) const {
  NegativeBatch batch;
  batch.k = k;
  batch.negatives.reserve(positives.size() * k);
  batch.sides.reserve(positives.size() * k);
  std::uniform_int_distribution<EntityId> pick(0, static_cast<EntityId>(num_entities_ - 1));
  std::size_t flat = 0;
  for (const Triple& pos : positives) {
    for (std::size_t i = 0; i < k; ++i, ++flat) {
      CorruptionSide side = CorruptionSide::kTail;
      if (mode_ == CorruptionMode::kHead ||
          (mode_ == CorruptionMode::kBoth && flat % 2 == 0)) {
        side = CorruptionSide::kHead;
      }
      Triple neg = pos;
      (side == CorruptionSide::kHead ? neg.head : neg.tail) = pick(rng);
      batch.negatives.push_back(neg);
      batch.sides.push_back(side);
    }
  }
  return batch;
}

NegativeBatch uniform_sample(std::span<const Triple> positives, std::size_t k,
                             std::size_t num_entities, std::uint64_t seed, CorruptionMode mode) {
  std::mt19937_64 rng(seed);
  return UniformNegativeSampler(num_entities, mode).sample(positives, k, rng);
}

}  // namespace kgemf
