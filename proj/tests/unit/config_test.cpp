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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "kgemf/config.hpp"
#include "kgemf/pipeline.hpp"

namespace kgemf {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json minimal() {
  return json::parse(R"({"dataset": {"synthetic": {"num_entities": 32, "seed": 0}},
                         "model": {"kind": "TransE", "dim": 8},
                         "training": {"loss": {"kind": "MarginRanking"}, "epochs": 1}})");
}

std::string error_message(const json& doc) {
  try {
    parse_run_config(doc);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

void collect_leaves(const ordered_json& node, const std::string& prefix,
                    std::set<std::string>& out) {
  if (node.is_object() && !node.empty()) {
    for (const auto& [key, value] : node.items()) {
      collect_leaves(value, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else {
    out.insert(prefix);
  }
}

TEST(Config, MinimalDocumentUsesDefaults) {
  const RunConfig c = parse_run_config(minimal());
  EXPECT_EQ(c.model.kind, "TransE");
  EXPECT_EQ(c.model.dim, 8u);
  EXPECT_EQ(c.training.train.approach, TrainingApproach::kSLCWA);
  EXPECT_FALSE(c.training.batch_size_given);
  EXPECT_TRUE(c.evaluation.filtered);
  EXPECT_FALSE(c.hpo.has_value());
  ASSERT_TRUE(c.dataset.synthetic.has_value());
  EXPECT_EQ(c.dataset.synthetic->num_entities, 32u);
}

TEST(Config, UnknownKeysAreRejectedWithTheirPath) {
  json doc = minimal();
  doc["training"]["optimizer"] = {{"kind", "Adam"}, {"lr", 0.1}};
  EXPECT_KGEMF_ERROR(parse_run_config(doc), ErrorCode::kInvalidConfig);
  EXPECT_NE(error_message(doc).find("training.optimizer.lr"), std::string::npos);
  json top = minimal();
  top["extra"] = 1;
  EXPECT_KGEMF_ERROR(parse_run_config(top), ErrorCode::kInvalidConfig);
}

TEST(Config, WrongTypesAndRangesAreRejected) {
  for (const char* patch : {R"({"model": {"dim": "eight"}})", R"({"model": {"dim": 0}})",
                            R"({"model": {"kind": "Nope"}})", R"({"model": {"p_norm": 3}})",
                            R"({"training": {"epochs": -1}})",
                            R"({"training": {"optimizer": {"learning_rate": 0}}})",
                            R"({"training": {"batch_size": 4, "sub_batch_size": 8}})",
                            R"({"dataset": {"split_ratios": [0.5, 0.5, 0.5]}})",
                            R"({"evaluation": {"ks": [0]}})",
                            R"({"amo": {"memory_budget_bytes": 0}})"}) {
    json doc = minimal();
    doc.merge_patch(json::parse(patch));
    SCOPED_TRACE(patch);
    EXPECT_KGEMF_ERROR(parse_run_config(doc), ErrorCode::kInvalidConfig);
  }
}

TEST(Config, DatasetSourceMustBeUnique) {
  json doc = minimal();
  doc["dataset"]["raw"] = "all.tsv";
  EXPECT_KGEMF_ERROR(parse_run_config(doc), ErrorCode::kInvalidConfig);
  doc["dataset"] = json::object();
  EXPECT_KGEMF_ERROR(parse_run_config(doc), ErrorCode::kInvalidConfig);
}

TEST(Config, IncompatibleCompositionNamesThePair) {
  json doc = minimal();
  doc["training"]["loss"]["kind"] = "CrossEntropy";
  EXPECT_KGEMF_ERROR(parse_run_config(doc), ErrorCode::kIncompatibleComposition);
  const std::string msg = error_message(doc);
  EXPECT_NE(msg.find("CrossEntropy"), std::string::npos);
  EXPECT_NE(msg.find("sLCWA"), std::string::npos);
  doc["training"]["approach"] = "LCWA";
  EXPECT_NO_THROW(parse_run_config(doc));
  doc["training"]["loss"]["kind"] = "NSSA";
  EXPECT_KGEMF_ERROR(parse_run_config(doc), ErrorCode::kIncompatibleComposition);
}

TEST(Config, ResolvedDocumentUsesOnlyKnownKeys) {
  json doc = minimal();
  doc.merge_patch(json::parse(R"({
    "training": {"batch_size": 16, "sub_batch_size": 4,
                 "early_stopping": {"patience": 2, "frequency": 5}},
    "hpo": {"budget": 2, "space": [{"name": "model.dim", "type": "categorical", "values": [4, 8]}]},
    "amo": {"memory_budget_bytes": 1000000, "requested_batch": 64}})"));
  const RunConfig c = parse_run_config(doc);
  std::set<std::string> leaves;
  collect_leaves(c.resolved, "", leaves);
  const auto keys = config_keys();
  const std::set<std::string> known(keys.begin(), keys.end());
  EXPECT_EQ(known.size(), keys.size());
  for (const auto& leaf : leaves) EXPECT_TRUE(known.count(leaf)) << leaf;
  // The resolved document parses back to the same resolution.
  EXPECT_EQ(parse_run_config(json(c.resolved)).resolved, c.resolved);
}

TEST(Config, HpoSpaceMustNameTunableKeys) {
  for (const char* name : {"dataset.split_seed", "hpo.budget", "model.colour"}) {
    json doc = minimal();
    doc["hpo"] = {{"space", json::array({{{"name", name}, {"type", "categorical"},
                                          {"values", {1, 2}}}})}};
    SCOPED_TRACE(name);
    EXPECT_KGEMF_ERROR(parse_run_config(doc), ErrorCode::kInvalidConfig);
  }
}

TEST(Config, RelativePathsResolveAgainstBaseDir) {
  json doc = minimal();
  doc["dataset"] = {{"train", "data/train.tsv"}};
  doc["output_dir"] = "out";
  const RunConfig c = parse_run_config(doc, "/srv/exp");
  EXPECT_EQ(*c.dataset.train, std::filesystem::path("/srv/exp/data/train.tsv"));
  EXPECT_EQ(c.output_dir, std::filesystem::path("/srv/exp/out"));
}

TEST(Config, LoadErrors) {
  const auto dir = std::filesystem::temp_directory_path() / "kgemf_config_test";
  std::filesystem::create_directories(dir);
  EXPECT_KGEMF_ERROR(load_run_config(dir / "missing.json"), ErrorCode::kIo);
  std::ofstream(dir / "broken.json") << "{\"model\": ";
  EXPECT_KGEMF_ERROR(load_run_config(dir / "broken.json"), ErrorCode::kInvalidConfig);
  std::filesystem::remove_all(dir);
}

TEST(Config, ApplyAssignmentAndSeedOverride) {
  Assignment a;
  a["model.dim"] = 64;
  a["training.optimizer.learning_rate"] = 0.5;
  const json doc = apply_assignment(minimal(), a);
  EXPECT_EQ(doc["model"]["dim"], 64);
  EXPECT_EQ(doc["model"]["kind"], "TransE");
  EXPECT_EQ(doc["training"]["optimizer"]["learning_rate"], 0.5);
  const json seeded = override_seed(doc, 9);
  EXPECT_EQ(seeded["model"]["seed"], 9);
  EXPECT_EQ(seeded["training"]["seed"], 9);
  EXPECT_FALSE(seeded.contains("hpo"));
}

TEST(Config, MemoryBudgetEnvironmentOverride) {
  json doc = minimal();
  doc["amo"] = {{"memory_budget_bytes", 1000}};
  const RunConfig c = parse_run_config(doc);
  ::unsetenv(kMemoryBudgetEnv);
  EXPECT_EQ(effective_memory_budget(c.amo), std::optional<std::uint64_t>(1000));
  ::setenv(kMemoryBudgetEnv, "123456", 1);
  EXPECT_EQ(effective_memory_budget(c.amo), std::optional<std::uint64_t>(123456));
  ::setenv(kMemoryBudgetEnv, "lots", 1);
  EXPECT_KGEMF_ERROR(effective_memory_budget(c.amo), ErrorCode::kInvalidConfig);
  ::unsetenv(kMemoryBudgetEnv);
  EXPECT_FALSE(effective_memory_budget(parse_run_config(minimal()).amo).has_value());
}

}  // namespace
}  // namespace kgemf
