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

#include <cstring>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "kgemf/checkpoint.hpp"
#include "oracles.hpp"

namespace kgemf {
namespace {

Vocabulary vocabulary_of(std::size_t entities, std::size_t relations) {
  Vocabulary v;
  for (std::size_t i = 0; i < entities; ++i) v.add_entity("e" + std::to_string(i));
  for (std::size_t i = 0; i < relations; ++i) v.add_relation("rel:" + std::to_string(i));
  return v;
}

std::string serialized(const ModelParams& p, const Vocabulary& v) {
  std::ostringstream out;
  write_checkpoint(out, p, v);
  return out.str();
}

TEST(Checkpoint, RoundTripIsBitExact) {
  for (const auto& model : testing::all_models()) {
    for (bool inverse : {false, true}) {
      ModelParams p = testing::random_model(model, 7, 3, 5, 11, inverse, model == "TransE" ? 1 : 2);
      p.table(0).values[0] = -0.0;
      p.table(0).values[1] = 1e-310;  // subnormal
      const Vocabulary v = vocabulary_of(7, 3);
      std::istringstream in(serialized(p, v));
      const Checkpoint c = read_checkpoint(in);
      EXPECT_TRUE(c.params == p) << model;
      EXPECT_TRUE(c.vocabulary == v);
      EXPECT_TRUE(std::signbit(c.params.table(0).values[0]));
      EXPECT_EQ(c.params.interaction().name(), model);
      EXPECT_EQ(c.params.p_norm(), p.p_norm());
    }
  }
}

TEST(Checkpoint, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "kgemf_checkpoint_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "model.kgemf";
  const ModelParams p = testing::random_model("ComplEx", 4, 2, 3, 1);
  save_checkpoint(path, p, vocabulary_of(4, 2));
  EXPECT_TRUE(load_checkpoint(path).params == p);
  std::filesystem::remove_all(dir);
  EXPECT_KGEMF_ERROR(load_checkpoint(dir / "missing.kgemf"), ErrorCode::kIo);
}

TEST(Checkpoint, CorruptInputIsRejected) {
  const std::string good =
      serialized(testing::random_model("DistMult", 4, 2, 3, 1), vocabulary_of(4, 2));
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  std::string bad_version = good;
  bad_version[8] = 99;
  for (const std::string& bytes :
       {bad_magic, bad_version, good.substr(0, good.size() / 2), good.substr(0, 5),
        std::string(), good + "trailing"}) {
    std::istringstream in(bytes);
    EXPECT_KGEMF_ERROR(read_checkpoint(in), ErrorCode::kCorruptCheckpoint);
  }
}

TEST(Checkpoint, VocabularyMustMatchModel) {
  const ModelParams p = testing::random_model("DistMult", 4, 2, 3, 1);
  std::ostringstream out;
  EXPECT_KGEMF_ERROR(write_checkpoint(out, p, vocabulary_of(5, 2)), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace kgemf
