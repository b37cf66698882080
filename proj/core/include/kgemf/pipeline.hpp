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

#ifndef KGEMF_PIPELINE_HPP_
#define KGEMF_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kgemf/config.hpp"
#include "kgemf/evaluation.hpp"
#include "kgemf/graph.hpp"
#include "kgemf/hpo.hpp"
#include "kgemf/model.hpp"
#include "kgemf/training.hpp"

namespace kgemf {

struct Dataset {
  Vocabulary vocabulary;
  TripleSet train;
  TripleSet validation;
  TripleSet test;
  std::size_t duplicates_removed = 0;
  std::optional<SplitReport> split_report;

  std::vector<Triple> all_triples() const;
};

std::string read_text_file(const std::filesystem::path& path);

// Loads one of: a synthetic KG split with `split_ratios`, a raw TSV file
// split with `split_ratios`, or separate train/validation/test files that
// share one vocabulary (validation and test are mapped onto the training
// vocabulary, so unseen labels raise kUnknownEntity).
Dataset load_dataset(const DatasetSection& section);

// The memory budget in effect: KGEMF_MEMORY_BUDGET_BYTES wins over the
// config value.
std::optional<std::uint64_t> effective_memory_budget(const AmoSection& section);

struct AmoReport {
  std::optional<std::uint64_t> budget_bytes;
  std::size_t train_batch = 0;
  std::optional<std::size_t> sub_batch;
  std::size_t eval_batch = 0;  // 0: everything at once
  std::size_t probes = 0;
};

// Resolves batch, sub-batch and evaluation batch sizes. Without a budget
// the configured values pass through.
AmoReport plan_batches(const RunConfig& config, const ModelParams& params,
                       std::size_t train_items, std::size_t eval_queries);

struct RunOptions {
  bool evaluate_test = true;
  // Score the validation split once training finishes.
  bool evaluate_validation = false;
  // Train on train + validation (final retraining after HPO).
  bool train_on_validation = false;
};

struct RunOutcome {
  ModelParams params;
  TrainResult training;
  AmoReport amo;
  std::optional<MetricReport> validation;
  std::optional<MetricReport> test;
  double wall_seconds = 0.0;
};

// Initializes, trains (with early stopping on the validation split when
// configured) and evaluates on the test split. Evaluation filters with
// every known split.
RunOutcome run_pipeline(const RunConfig& config, const Dataset& data,
                        const RunOptions& options = {});

// Reads `metric` from a flattened report; throws kInvalidConfig if absent.
double metric_value(const MetricReport& report, const std::string& metric);

// 64-bit FNV-1a of the resolved config's canonical dump, as 16 hex digits.
std::string config_hash(const nlohmann::ordered_json& resolved);

// Flat key -> number object, keys sorted.
nlohmann::ordered_json metrics_json(const MetricReport& report);

nlohmann::ordered_json manifest_json(const RunConfig& config, const Dataset& data,
                                     const RunOutcome& outcome);

struct HpoRun {
  HpoResult search;
  RetrainSummary retrain;
  nlohmann::ordered_json best_config;  // resolved, with the best trial's seed
};

// Runs the search described by the document's `hpo` section. Each trial
// applies its assignment to `document`, trains on train and scores the
// validation split; the best assignment is then retrained n_retrain times
// and tested.
HpoRun run_hpo_pipeline(const nlohmann::json& document, const std::filesystem::path& base_dir,
                        const Dataset& data);

}  // namespace kgemf

#endif  // KGEMF_PIPELINE_HPP_
