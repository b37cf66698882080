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

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "kgemf/pipeline.hpp"
#include "oracles.hpp"

namespace kgemf {
namespace {

using nlohmann::json;

json base_document() {
  return json::parse(R"({"dataset": {"synthetic": {"num_entities": 32, "seed": 0}},
                         "model": {"kind": "TransE", "dim": 8, "seed": 1},
                         "training": {"loss": {"kind": "MarginRanking"}, "batch_size": 16,
                                      "num_negatives": 2, "epochs": 5, "seed": 1},
                         "evaluation": {"ks": [1, 10]}})");
}

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) { ::setenv(name, value, 1); }
  ~ScopedEnv() { ::unsetenv(name_); }

 private:
  const char* name_;
};

TEST(LoadDataset, SyntheticSplitCoversEveryTriple) {
  const RunConfig c = parse_run_config(base_document());
  const Dataset d = load_dataset(c.dataset);
  EXPECT_EQ(d.train.size() + d.validation.size() + d.test.size(), 97u);
  EXPECT_EQ(d.all_triples().size(), 97u);
  EXPECT_EQ(d.vocabulary.num_entities(), 32u);
  EXPECT_EQ(d.vocabulary.num_relations(), 4u);
  ASSERT_TRUE(d.split_report.has_value());
}

TEST(LoadDataset, SeparateFilesShareTheTrainingVocabulary) {
  const auto dir = std::filesystem::temp_directory_path() / "kgemf_pipeline_files";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "train.tsv") << "a\tr\tb\nb\tr\tc\n";
  std::ofstream(dir / "test.tsv") << "a\tr\tc\n";
  std::ofstream(dir / "bad.tsv") << "a\tr\tzzz\n";
  DatasetSection s;
  s.train = dir / "train.tsv";
  s.test = dir / "test.tsv";
  const Dataset d = load_dataset(s);
  EXPECT_EQ(d.train.size(), 2u);
  EXPECT_EQ(d.test.size(), 1u);
  EXPECT_EQ(d.validation.size(), 0u);
  EXPECT_EQ(d.test.triples()[0], (Triple{0, 0, 2}));
  s.test = dir / "bad.tsv";
  EXPECT_KGEMF_ERROR(load_dataset(s), ErrorCode::kUnknownEntity);
  s.test = dir / "missing.tsv";
  EXPECT_KGEMF_ERROR(load_dataset(s), ErrorCode::kIo);
  std::filesystem::remove_all(dir);
}

TEST(PlanBatches, PassThroughWithoutBudget) {
  const RunConfig c = parse_run_config(base_document());
  const ModelParams p = init_model({"TransE", 32, 4, 8});
  const AmoReport r = plan_batches(c, p, 77, 10);
  EXPECT_EQ(r.train_batch, 16u);
  EXPECT_FALSE(r.sub_batch.has_value());
  EXPECT_EQ(r.probes, 0u);
}

TEST(PlanBatches, BudgetForcesSubBatching) {
  json doc = base_document();
  const ModelParams p = init_model({"TransE", 32, 4, 8});
  MemoryModel m = memory_model_for(p, MemoryMode::kTrainSlcwa, 2, OptimizerKind::kAdam);
  doc["amo"] = {{"memory_budget_bytes", estimate_bytes(m, 5)}};
  const AmoReport r = plan_batches(parse_run_config(doc), p, 77, 10);
  EXPECT_EQ(r.train_batch, 16u);
  EXPECT_EQ(r.sub_batch, std::optional<std::size_t>(5));
  EXPECT_GT(r.probes, 0u);
}

TEST(PlanBatches, SearchesTheBatchWhenUnset) {
  json doc = base_document();
  doc["training"].erase("batch_size");
  const ModelParams p = init_model({"TransE", 32, 4, 8});
  const RunConfig free_run = parse_run_config(doc);
  EXPECT_EQ(plan_batches(free_run, p, 77, 10).train_batch, 77u);
  const MemoryModel m = memory_model_for(p, MemoryMode::kTrainSlcwa, 2, OptimizerKind::kAdam);
  const ScopedEnv env(kMemoryBudgetEnv, std::to_string(estimate_bytes(m, 9) + 1).c_str());
  const AmoReport r = plan_batches(free_run, p, 77, 10);
  EXPECT_EQ(r.train_batch, testing::linear_scan_max(77, analytic_probe(m, {*r.budget_bytes})));
  EXPECT_EQ(r.train_batch, 9u);
}

TEST(RunPipeline, DeterministicAndEvaluatesTest) {
  const RunConfig c = parse_run_config(base_document());
  const Dataset d = load_dataset(c.dataset);
  const RunOutcome a = run_pipeline(c, d);
  const RunOutcome b = run_pipeline(c, d);
  ASSERT_TRUE(a.test.has_value());
  EXPECT_FALSE(a.validation.has_value());
  EXPECT_TRUE(a.params == b.params);
  EXPECT_EQ(metrics_json(*a.test), metrics_json(*b.test));
  EXPECT_EQ(a.training.loss_history.size(), 5u);
  EXPECT_EQ(a.test->num_queries, d.test.size());
}

TEST(RunPipeline, EarlyStoppingNeedsValidation) {
  json doc = base_document();
  doc["dataset"]["split_ratios"] = {0.9, 0.0, 0.1};
  doc["training"]["early_stopping"] = {{"patience", 1}, {"frequency", 1}};
  const RunConfig c = parse_run_config(doc);
  EXPECT_KGEMF_ERROR(run_pipeline(c, load_dataset(c.dataset)), ErrorCode::kInvalidConfig);
}

TEST(RunPipeline, EarlyStoppingStopsTraining) {
  json doc = base_document();
  doc["training"]["epochs"] = 500;
  doc["training"]["optimizer"] = {{"kind", "SGD"}, {"learning_rate", 1e-12}};
  doc["training"]["early_stopping"] = {{"patience", 1}, {"frequency", 2}};
  const RunConfig c = parse_run_config(doc);
  const RunOutcome r = run_pipeline(c, load_dataset(c.dataset));
  EXPECT_EQ(r.training.stopped_epoch, std::optional<std::size_t>(6));
}

TEST(Reports, MetricValueAndJson) {
  const RunConfig c = parse_run_config(base_document());
  const RunOutcome r = run_pipeline(c, load_dataset(c.dataset));
  const json flat = json::parse(metrics_json(*r.test).dump());
  std::vector<std::string> keys;
  for (const auto& [k, v] : flat.items()) keys.push_back(k);
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
  // 3 sides x 3 rank types x (MR, MRR, AMR, hits@1, hits@10) + two AUCs.
  EXPECT_EQ(keys.size(), 3u * 3u * 5u + 2u);
  EXPECT_EQ(metric_value(*r.test, "both.average.hits_at_10"),
            flat["both.average.hits_at_10"].get<double>());
  EXPECT_KGEMF_ERROR(metric_value(*r.test, "both.average.hits_at_7"), ErrorCode::kInvalidConfig);
}

TEST(Reports, ConfigHashAndManifest) {
  const RunConfig c = parse_run_config(base_document());
  json other_doc = base_document();
  other_doc["model"]["dim"] = 4;
  const std::string h = config_hash(c.resolved);
  EXPECT_EQ(h.size(), 16u);
  EXPECT_TRUE(std::all_of(h.begin(), h.end(), [](char ch) { return std::isxdigit(ch); }));
  EXPECT_EQ(h, config_hash(parse_run_config(base_document()).resolved));
  EXPECT_NE(h, config_hash(parse_run_config(other_doc).resolved));

  const Dataset d = load_dataset(c.dataset);
  const RunOutcome r = run_pipeline(c, d);
  const auto m = manifest_json(c, d, r);
  EXPECT_EQ(m["config_hash"], h);
  EXPECT_EQ(m["amo"]["batch_size"], 16);
  EXPECT_EQ(m["seeds"]["model"], 1);
  EXPECT_EQ(m["epochs_run"], 5);
  EXPECT_EQ(m["num_parameters"], r.params.num_parameters());
  EXPECT_TRUE(m.contains("wall_seconds"));
}

TEST(HpoPipeline, BudgetAndBestConfig) {
  json doc = base_document();
  doc["hpo"] = json::parse(R"({"budget": 2, "n_retrain": 2, "seed": 4,
    "space": [{"name": "model.dim", "type": "categorical", "values": [4, 8]},
              {"name": "training.loss.margin", "type": "categorical", "values": [0.5, 1.0]}]})");
  const RunConfig c = parse_run_config(doc);
  const HpoRun run = run_hpo_pipeline(doc, {}, load_dataset(c.dataset));
  EXPECT_EQ(run.search.trials.size(), 2u);
  EXPECT_EQ(run.retrain.reports.size(), 2u);
  EXPECT_FALSE(run.best_config.contains("hpo"));
  EXPECT_EQ(run.best_config["model"]["dim"], run.search.best.config["model.dim"]);
  for (const auto& [k, v] : run.retrain.stddev) EXPECT_GE(v, 0.0);
  EXPECT_NO_THROW(parse_run_config(json(run.best_config)));
}

}  // namespace
}  // namespace kgemf
