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

#ifndef KGEMF_CONFIG_HPP_
#define KGEMF_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kgemf/evaluation.hpp"
#include "kgemf/graph.hpp"
#include "kgemf/hpo.hpp"
#include "kgemf/model.hpp"
#include "kgemf/training.hpp"

namespace kgemf {

struct DatasetSection {
  std::optional<std::filesystem::path> train;
  std::optional<std::filesystem::path> validation;
  std::optional<std::filesystem::path> test;
  std::optional<std::filesystem::path> raw;
  std::optional<SyntheticKgOptions> synthetic;
  SplitRatios split_ratios;
  std::uint64_t split_seed = 0;
};

struct ModelSection {
  std::string kind = "TransE";
  std::size_t dim = 32;
  InitScheme init = InitScheme::kUniformXavier;
  std::uint64_t seed = 0;
  int p_norm = 2;
};

struct TrainingSection {
  TrainConfig train;
  // Unset: the batch size is chosen by the memory search (capped by
  // amo.requested_batch), or the whole training set without a budget.
  bool batch_size_given = true;
  std::optional<EarlyStopperOptions> early_stopping;
};

struct EvaluationSection {
  std::vector<std::size_t> ks{1, 3, 5, 10};
  bool filtered = true;
  bool auc = true;
  std::size_t batch_size = 0;
};

struct HpoSection {
  HpoConfig config;
  SearchSpace space;
  nlohmann::json space_json;
};

struct AmoSection {
  std::optional<std::uint64_t> memory_budget_bytes;
  std::optional<std::size_t> requested_batch;
};

struct RunConfig {
  DatasetSection dataset;
  ModelSection model;
  TrainingSection training;
  EvaluationSection evaluation;
  std::optional<HpoSection> hpo;
  AmoSection amo;
  std::filesystem::path output_dir = "kgemf-out";
  // The validated document with defaults filled in.
  nlohmann::ordered_json resolved;
};

// Strict parse: unknown keys, wrong types and out-of-range values raise
// kInvalidConfig; a loss/approach pair outside the compatibility table
// raises kIncompatibleComposition. Relative paths resolve against
// `base_dir`.
RunConfig parse_run_config(const nlohmann::json& document,
                           const std::filesystem::path& base_dir = {});

RunConfig load_run_config(const std::filesystem::path& path);

// Every dotted key the config schema accepts, e.g. "training.loss.margin".
std::vector<std::string> config_keys();

// Sets each dotted key of `assignment` inside a copy of `document`.
nlohmann::json apply_assignment(nlohmann::json document, const Assignment& assignment);

// Sets model.seed, training.seed and hpo.seed.
nlohmann::json override_seed(nlohmann::json document, std::uint64_t seed);

// Environment variable that overrides amo.memory_budget_bytes.
inline constexpr const char* kMemoryBudgetEnv = "KGEMF_MEMORY_BUDGET_BYTES";

}  // namespace kgemf

#endif  // KGEMF_CONFIG_HPP_
