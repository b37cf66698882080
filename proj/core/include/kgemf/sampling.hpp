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

#ifndef KGEMF_SAMPLING_HPP_
#define KGEMF_SAMPLING_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "kgemf/graph.hpp"

namespace kgemf {

enum class CorruptionSide : std::uint8_t { kHead, kTail };
enum class CorruptionMode { kHead, kTail, kBoth };

std::string_view corruption_mode_name(CorruptionMode mode);
CorruptionMode parse_corruption_mode(std::string_view name);

// k corrupted copies per positive; negatives[j * k + i] comes from
// positive j and differs from it only on sides[j * k + i].
struct NegativeBatch {
  std::size_t k = 0;
  std::vector<Triple> negatives;
  std::vector<CorruptionSide> sides;
};

class NegativeSampler {
 public:
  virtual ~NegativeSampler() = default;
  virtual std::string_view name() const = 0;
  virtual NegativeBatch sample(std::span<const Triple> positives, std::size_t k,
                               std::mt19937_64& rng) const = 0;
};

// Replaces the head or tail with an entity drawn uniformly from all
// entities. No filtering: the draw may reproduce a known triple or even the
// source entity. In kBoth mode sides alternate head, tail, head, ... over
// the flattened negative index.
class UniformNegativeSampler final : public NegativeSampler {
 public:
  // Throws kTooFewEntities when num_entities < 2.
  UniformNegativeSampler(std::size_t num_entities, CorruptionMode mode);

  std::string_view name() const override { return "uniform"; }
  NegativeBatch sample(std::span<const Triple> positives, std::size_t k,
                       std::mt19937_64& rng) const override;

 private:
  std::size_t num_entities_;
  CorruptionMode mode_;
};

NegativeBatch uniform_sample(std::span<const Triple> positives, std::size_t k,
                             std::size_t num_entities, std::uint64_t seed, CorruptionMode mode);

}  // namespace kgemf

#endif  // KGEMF_SAMPLING_HPP_
