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

#include "kgemf/amo.hpp"

#include <string>

#include "kgemf/error.hpp"

namespace kgemf {

std::string_view memory_mode_name(MemoryMode mode) {
  switch (mode) {
    case MemoryMode::kTrainSlcwa: return "train_slcwa";
    case MemoryMode::kTrainLcwa: return "train_lcwa";
    case MemoryMode::kEval: return "eval";
  }
  return "eval";
}

std::uint64_t estimate_bytes(const MemoryModel& model, std::size_t batch) {
  const std::uint64_t w = model.bytes_per_value;
  const bool eval = model.mode == MemoryMode::kEval;
  const std::uint64_t multiplier = eval ? 1 : model.optimizer_multiplier;
  const std::uint64_t factor = eval ? 1 : 2;
  std::uint64_t rows = 0;
  std::uint64_t scores = 0;
  if (model.mode == MemoryMode::kTrainSlcwa) {
    rows = 3 * (1 + static_cast<std::uint64_t>(model.num_negatives));
    scores = 1 + static_cast<std::uint64_t>(model.num_negatives);
  } else {
    rows = 2 + static_cast<std::uint64_t>(model.num_entities);
    scores = model.num_entities;
  }
  const std::uint64_t params = static_cast<std::uint64_t>(model.num_parameters) * w * multiplier;
  const std::uint64_t per_item = (rows * model.dim + scores) * w * factor;
  return params + static_cast<std::uint64_t>(batch) * per_item;
}

MemoryModel memory_model_for(const ModelParams& params, MemoryMode mode,
                             std::size_t num_negatives, OptimizerKind optimizer) {
  MemoryModel m;
  m.dim = params.max_row_width();
  m.num_entities = params.num_entities();
  m.num_parameters = params.num_parameters();
  m.num_negatives = num_negatives;
  m.optimizer_multiplier = optimizer == OptimizerKind::kAdam ? 3 : 1;
  m.mode = mode;
  return m;
}

Probe analytic_probe(const MemoryModel& model, MemoryBudget budget) {
  return [model, budget](std::size_t batch) {
    const std::uint64_t bytes = estimate_bytes(model, batch);
    return ProbeResult{batch, bytes <= budget.limit_bytes, bytes};
  };
}

BatchSearchResult find_max_batch(std::size_t requested, const Probe& probe) {
  if (requested == 0) throw Error(ErrorCode::kInvalidArgument, "requested batch must be >= 1");
  BatchSearchResult result;
  auto fits = [&](std::size_t b) {
    ++result.probes;
    return probe(b).fits;
  };
  if (fits(requested)) {
    result.batch = requested;
    return result;
  }
  std::size_t fail = requested;
  std::size_t ok = requested / 2;
  while (true) {
    if (ok == 0) {
      throw Error(ErrorCode::kNoFeasibleBatch,
                  "even a batch of 1 exceeds the memory budget");
    }
    if (fits(ok)) break;
    fail = ok;
    ok /= 2;
  }
  // Invariant: probe(ok) fits, probe(fail) does not.
  while (fail - ok > 1) {
    const std::size_t mid = ok + (fail - ok) / 2;
    if (fits(mid)) {
      ok = mid;
    } else {
      fail = mid;
    }
  }
  result.batch = ok;
  return result;
}

BatchSearchResult find_max_sub_batch(std::size_t train_batch, const Probe& probe) {
  return find_max_batch(train_batch, probe);
}

}  // namespace kgemf
