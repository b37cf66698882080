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

#ifndef KGEMF_AMO_HPP_
#define KGEMF_AMO_HPP_

#include <cstdint>
#include <functional>
#include <string_view>

#include "kgemf/model.hpp"
#include "kgemf/training.hpp"

namespace kgemf {

enum class MemoryMode { kTrainSlcwa, kTrainLcwa, kEval };

std::string_view memory_mode_name(MemoryMode mode);

struct MemoryBudget {
  std::uint64_t limit_bytes = 0;
};

// Analytic memory estimator:
//
//   bytes(batch) = P * w * m  +  batch * (rows * dim + scores) * w * f
//
// with P the parameter count, w bytes per value, m the optimizer-state
// multiplier (1 for SGD, 3 for Adam, 1 in eval mode), f = 2 (activation +
// gradient) when training and 1 when evaluating, and per batch item
//   train_slcwa: rows = 3 (1 + k),  scores = 1 + k
//   train_lcwa:  rows = 2 + |E|,    scores = |E|
//   eval:        rows = 2 + |E|,    scores = |E|
struct MemoryModel {
  std::size_t bytes_per_value = 8;
  std::size_t dim = 1;  // widest embedding row
  std::size_t num_entities = 1;
  std::size_t num_parameters = 0;
  std::size_t num_negatives = 1;
  std::size_t optimizer_multiplier = 1;
  MemoryMode mode = MemoryMode::kTrainSlcwa;
};

std::uint64_t estimate_bytes(const MemoryModel& model, std::size_t batch);

MemoryModel memory_model_for(const ModelParams& params, MemoryMode mode,
                             std::size_t num_negatives, OptimizerKind optimizer);

struct ProbeResult {
  std::size_t batch = 0;
  bool fits = false;
  std::uint64_t peak_bytes = 0;
};

using Probe = std::function<ProbeResult(std::size_t batch)>;

// Probe backed by estimate_bytes: fits <=> estimate <= limit.
Probe analytic_probe(const MemoryModel& model, MemoryBudget budget);

struct BatchSearchResult {
  std::size_t batch = 0;
  std::size_t probes = 0;
};

// Largest fitting batch <= requested for a monotone probe. Tries the
// requested size, halves until something fits, then binary-searches between
// the last failure and the first fit. Throws kNoFeasibleBatch when a batch
// of 1 does not fit.
BatchSearchResult find_max_batch(std::size_t requested, const Probe& probe);

// Same search over sub-batch sizes for a fixed training batch; training
// then accumulates gradients over sub-batches of the returned size.
BatchSearchResult find_max_sub_batch(std::size_t train_batch, const Probe& probe);

}  // namespace kgemf

#endif  // KGEMF_AMO_HPP_
