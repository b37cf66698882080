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

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "kgemf/graph.hpp"

namespace kgemf {
namespace {

TripleSet numbered_chain(std::size_t n, std::size_t entities, std::size_t relations) {
  std::vector<Triple> ts;
  std::set<Triple> seen;
  std::mt19937_64 rng(99);
  while (ts.size() < n) {
    Triple t{static_cast<EntityId>(rng() % entities), static_cast<RelationId>(rng() % relations),
             static_cast<EntityId>(rng() % entities)};
    if (seen.insert(t).second) ts.push_back(t);
  }
  return TripleSet(ts, entities, relations);
}

TEST(ParseTriples, CountsEntitiesAndRelations) {
  const ParseResult r = parse_triples("a\tlikes\tb\nb\tlikes\tc");
  EXPECT_EQ(r.vocabulary.num_entities(), 3u);
  EXPECT_EQ(r.vocabulary.num_relations(), 1u);
  EXPECT_EQ(r.triples.size(), 2u);
  EXPECT_EQ(r.duplicates_removed, 0u);
  EXPECT_EQ(r.vocabulary.entity_id("a"), 0u);
  EXPECT_EQ(r.vocabulary.entity_id("c"), 2u);
}

TEST(ParseTriples, EmptyInputIsAnError) {
  EXPECT_KGEMF_ERROR(parse_triples(""), ErrorCode::kEmptyDataset);
  EXPECT_KGEMF_ERROR(parse_triples("\n\n"), ErrorCode::kEmptyDataset);
}

TEST(ParseTriples, DropsDuplicates) {
  const ParseResult r = parse_triples("a\tlikes\tb\na\tlikes\tb");
  EXPECT_EQ(r.triples.size(), 1u);
  EXPECT_EQ(r.duplicates_removed, 1u);
}

TEST(ParseTriples, ReportsMalformedLineNumber) {
  try {
    parse_triples("a\tr\tb\n\nc\td\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedLine);
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
  }
  EXPECT_KGEMF_ERROR(parse_triples("a\tb\tc\td\n"), ErrorCode::kMalformedLine);
}

TEST(ParseTriples, AcceptsCrlfAndTrailingNewline) {
  const ParseResult r = parse_triples("a\tr\tb\r\nb\tr\tc\r\n");
  EXPECT_EQ(r.triples.size(), 2u);
  EXPECT_EQ(r.vocabulary.entity_label(2), "c");
}

TEST(ParseTriples, SerializeRoundTrip) {
  const std::string text = synthetic_kg_tsv({32, 5});
  const ParseResult a = parse_triples(text);
  const std::string again = serialize_triples(a.triples, a.vocabulary);
  const ParseResult b = parse_triples(again);
  EXPECT_EQ(a.triples, b.triples);
  EXPECT_EQ(a.vocabulary, b.vocabulary);
  EXPECT_EQ(again, serialize_triples(b.triples, b.vocabulary));
}

TEST(ParseTriples, SharedVocabularyContinuesNumbering) {
  ParseResult first = parse_triples("a\tr\tb\n");
  const ParseResult second = parse_triples("b\ts\tc\n", first.vocabulary);
  EXPECT_EQ(second.vocabulary.entity_id("c"), 2u);
  EXPECT_EQ(second.vocabulary.relation_id("s"), 1u);
  EXPECT_EQ(second.triples[0], (Triple{1, 1, 2}));
}

TEST(MapTriples, ListsEveryUnknownLabel) {
  const ParseResult r = parse_triples("a\tr\tb\n");
  try {
    map_triples("a\tr\tzz\nyy\tr\tb\n", r.vocabulary);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownEntity);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("zz"), std::string::npos);
    EXPECT_NE(msg.find("yy"), std::string::npos);
  }
  const TripleSet ok = map_triples("b\tr\ta\n", r.vocabulary);
  EXPECT_EQ(ok[0], (Triple{1, 0, 0}));
}

TEST(TripleSet, RejectsOutOfRangeAndDuplicates) {
  EXPECT_KGEMF_ERROR(TripleSet({{0, 0, 5}}, 3, 1), ErrorCode::kIdOutOfRange);
  EXPECT_KGEMF_ERROR(TripleSet({{0, 2, 1}}, 3, 1), ErrorCode::kIdOutOfRange);
  EXPECT_KGEMF_ERROR(TripleSet({{0, 0, 1}, {0, 0, 1}}, 3, 1), ErrorCode::kInvalidArgument);
}

TEST(RandomSplit, PartitionsAndCoversVocabulary) {
  const TripleSet all = numbered_chain(100, 30, 4);
  SplitReport report;
  const DatasetSplits s = random_split(all, {0.8, 0.1, 0.1}, 7, &report);
  EXPECT_EQ(report.target_sizes, (std::array<std::size_t, 3>{80, 10, 10}));
  EXPECT_EQ(s.train.size() + s.validation.size() + s.test.size(), 100u);
  EXPECT_EQ(s.train.size(), 80u + report.moved_to_train);

  std::multiset<Triple> merged;
  for (const TripleSet* part : {&s.train, &s.validation, &s.test}) {
    merged.insert(part->triples().begin(), part->triples().end());
  }
  EXPECT_EQ(merged, std::multiset<Triple>(all.triples().begin(), all.triples().end()));

  std::set<EntityId> in_all, in_train;
  std::set<RelationId> rel_all, rel_train;
  for (const Triple& t : all.triples()) {
    in_all.insert(t.head);
    in_all.insert(t.tail);
    rel_all.insert(t.relation);
  }
  for (const Triple& t : s.train.triples()) {
    in_train.insert(t.head);
    in_train.insert(t.tail);
    rel_train.insert(t.relation);
  }
  EXPECT_EQ(in_all, in_train);
  EXPECT_EQ(rel_all, rel_train);
}

TEST(RandomSplit, CoverageRepairIsMinimalForSingletons) {
  // Entity 9 appears in exactly one triple; wherever it lands, it must end
  // up in train, and nothing else needs to move when the rest is dense.
  std::vector<Triple> ts;
  for (EntityId h = 0; h < 6; ++h) {
    for (EntityId t = 0; t < 6; ++t) {
      if (h != t) ts.push_back({h, 0, t});
    }
  }
  ts.push_back({0, 0, 9});
  const TripleSet all(ts, 10, 1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SplitReport report;
    const DatasetSplits s = random_split(all, {0.6, 0.2, 0.2}, seed, &report);
    const auto& tr = s.train.triples();
    EXPECT_NE(std::find(tr.begin(), tr.end(), Triple{0, 0, 9}), tr.end());
    EXPECT_LE(report.moved_to_train, 1u);
  }
}

TEST(RandomSplit, AllTrain) {
  const TripleSet all = numbered_chain(40, 12, 2);
  const DatasetSplits s = random_split(all, {1.0, 0.0, 0.0}, 3);
  EXPECT_EQ(s.train.size(), 40u);
  EXPECT_TRUE(s.validation.empty());
  EXPECT_TRUE(s.test.empty());
}

TEST(RandomSplit, DeterministicInSeed) {
  const TripleSet all = numbered_chain(100, 30, 4);
  const DatasetSplits a = random_split(all, {0.8, 0.1, 0.1}, 11);
  const DatasetSplits b = random_split(all, {0.8, 0.1, 0.1}, 11);
  const DatasetSplits c = random_split(all, {0.8, 0.1, 0.1}, 12);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.validation, b.validation);
  EXPECT_EQ(a.test, b.test);
  EXPECT_NE(a.test, c.test);
}

TEST(RandomSplit, InvalidRatiosAndInfeasibleSplits) {
  const TripleSet all = numbered_chain(20, 8, 2);
  EXPECT_KGEMF_ERROR(random_split(all, {0.5, 0.2, 0.2}, 0), ErrorCode::kInvalidArgument);
  EXPECT_KGEMF_ERROR(random_split(all, {-0.1, 0.6, 0.5}, 0), ErrorCode::kInvalidArgument);
  EXPECT_KGEMF_ERROR(random_split(all, {0.0, 0.5, 0.5}, 0), ErrorCode::kInfeasibleSplit);
  EXPECT_KGEMF_ERROR(random_split(TripleSet({}, 2, 1), {0.8, 0.1, 0.1}, 0), ErrorCode::kEmptyDataset);
}

TEST(InverseRelations, SingleRelation) {
  const TripleSet ts({{0, 0, 1}}, 2, 1);
  const TripleSet inv = add_inverse_relations(ts);
  EXPECT_EQ(inv.triples(), (std::vector<Triple>{{0, 0, 1}, {1, 1, 0}}));
  EXPECT_TRUE(inv.inverses_added());
  EXPECT_EQ(inv.num_relations(), 2u);
  EXPECT_EQ(inv.num_relations_base(), 1u);
}

TEST(InverseRelations, SecondApplicationFails) {
  const TripleSet inv = add_inverse_relations(TripleSet({{0, 0, 1}}, 2, 1));
  EXPECT_KGEMF_ERROR(add_inverse_relations(inv), ErrorCode::kAlreadyAugmented);
}

TEST(InverseRelations, BlockLayout) {
  const TripleSet inv = add_inverse_relations(TripleSet({{4, 2, 9}}, 10, 3));
  EXPECT_EQ(inv[1], (Triple{9, 5, 4}));
  EXPECT_EQ(inverse_relation(2, 3), 5u);
  EXPECT_EQ(inverse_relation(5, 3), 2u);
}

TEST(InverseRelations, ExhaustivePairing) {
  const TripleSet ts = numbered_chain(60, 15, 3);
  const TripleSet inv = add_inverse_relations(ts);
  ASSERT_EQ(inv.size(), 2 * ts.size());
  const std::set<Triple> all(inv.triples().begin(), inv.triples().end());
  for (const Triple& t : inv.triples()) {
    const Triple mirror{t.tail, inverse_relation(t.relation, 3), t.head};
    EXPECT_TRUE(all.count(mirror)) << t.head << " " << t.relation << " " << t.tail;
  }
}

TEST(SyntheticKg, ShapeAndDeterminism) {
  const std::string a = synthetic_kg_tsv({32, 0});
  EXPECT_EQ(a, synthetic_kg_tsv({32, 0}));
  EXPECT_NE(a, synthetic_kg_tsv({32, 1}));
  const ParseResult r = parse_triples(a);
  EXPECT_EQ(r.vocabulary.num_entities(), 32u);
  EXPECT_EQ(r.vocabulary.num_relations(), 4u);
  EXPECT_EQ(r.duplicates_removed, 0u);
  // 4 x 8 grid: next 4*7, skip 4*6, up 3*8, diag 3*7.
  EXPECT_EQ(r.triples.size(), 28u + 24u + 24u + 21u);
  EXPECT_KGEMF_ERROR(synthetic_kg_tsv({7, 0}), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace kgemf
