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

#ifndef KGEMF_GRAPH_HPP_
#define KGEMF_GRAPH_HPP_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kgemf {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

struct Triple {
  EntityId head = 0;
  RelationId relation = 0;
  EntityId tail = 0;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::uint64_t x = (static_cast<std::uint64_t>(t.head) << 32) ^ t.tail;
    x ^= static_cast<std::uint64_t>(t.relation) * 0x9E3779B97F4A7C15ULL;
    x ^= x >> 29;
    return static_cast<std::size_t>(x * 0xBF58476D1CE4E5B9ULL);
  }
};

// Bijective label <-> dense id maps for entities and relations.
class Vocabulary {
 public:
  // Returns the id of `label`, assigning the next free id on first sight.
  EntityId add_entity(std::string_view label);
  RelationId add_relation(std::string_view label);

  std::optional<EntityId> entity_id(std::string_view label) const;
  std::optional<RelationId> relation_id(std::string_view label) const;

  const std::string& entity_label(EntityId id) const { return entities_.at(id); }
  const std::string& relation_label(RelationId id) const { return relations_.at(id); }

  std::size_t num_entities() const { return entities_.size(); }
  std::size_t num_relations() const { return relations_.size(); }

  const std::vector<std::string>& entity_labels() const { return entities_; }
  const std::vector<std::string>& relation_labels() const { return relations_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.entities_ == b.entities_ && a.relations_ == b.relations_;
  }

 private:
  std::vector<std::string> entities_;
  std::vector<std::string> relations_;
  std::unordered_map<std::string, EntityId> entity_index_;
  std::unordered_map<std::string, RelationId> relation_index_;
};

// An immutable, duplicate-free list of integer-coded triples.
//
// When `inverses_added()` is true the relation ids in [base, 2*base) are the
// inverse block: relation r + base is the inverse of relation r.
class TripleSet {
 public:
  TripleSet() = default;

  // Throws kIdOutOfRange for ids outside the declared counts and
  // kInvalidArgument for duplicate triples.
  TripleSet(std::vector<Triple> triples, std::size_t num_entities,
            std::size_t num_relations_base, bool inverses_added = false);

  const std::vector<Triple>& triples() const { return triples_; }
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }
  const Triple& operator[](std::size_t i) const { return triples_[i]; }

  std::size_t num_entities() const { return num_entities_; }
  std::size_t num_relations_base() const { return num_relations_base_; }
  // Relation id range in use: doubled once inverses are added.
  std::size_t num_relations() const {
    return inverses_added_ ? 2 * num_relations_base_ : num_relations_base_;
  }
  bool inverses_added() const { return inverses_added_; }

  friend bool operator==(const TripleSet&, const TripleSet&) = default;

 private:
  std::vector<Triple> triples_;
  std::size_t num_entities_ = 0;
  std::size_t num_relations_base_ = 0;
  bool inverses_added_ = false;
};

struct ParseResult {
  TripleSet triples;
  Vocabulary vocabulary;
  std::size_t duplicates_removed = 0;
};

// Parses `head<TAB>relation<TAB>tail` lines. Ids are assigned in order of
// first appearance; blank lines are skipped; duplicates are dropped and
// counted. Throws kEmptyDataset / kMalformedLine (with 1-based line number).
ParseResult parse_triples(std::string_view text);

// Same as above but continues numbering from an existing vocabulary, so that
// several files can share one id space.
ParseResult parse_triples(std::string_view text, Vocabulary vocabulary);

// Maps TSV content onto a fixed vocabulary. Labels missing from the
// vocabulary raise kUnknownEntity naming every offender.
TripleSet map_triples(std::string_view text, const Vocabulary& vocabulary);

// Inverse of parse_triples for base-relation triples.
std::string serialize_triples(const TripleSet& triples, const Vocabulary& vocabulary);

// Re-labels a triple set with larger entity/relation counts (used when
// several files are parsed into one growing vocabulary).
TripleSet with_counts(const TripleSet& triples, std::size_t num_entities,
                      std::size_t num_relations_base);

struct DatasetSplits {
  TripleSet train;
  TripleSet validation;
  TripleSet test;
};

struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

struct SplitReport {
  std::array<std::size_t, 3> target_sizes{};  // before coverage repair
  std::size_t moved_to_train = 0;
};

// Seeded random split into train/validation/test. After the proportional
// split, triples are moved from validation/test into train until every
// entity and relation occurs in train. Greedy: triples covering more
// uncovered ids move first, and a triple moves only if it covers something.
DatasetSplits random_split(const TripleSet& triples, const SplitRatios& ratios,
                           std::uint64_t seed, SplitReport* report = nullptr);

// Appends (t, r + |R|, h) for every (h, r, t). Throws kAlreadyAugmented if
// the set already carries inverses.
TripleSet add_inverse_relations(const TripleSet& triples);

// Inverse id of a base relation (and vice versa) in the block layout.
inline RelationId inverse_relation(RelationId r, std::size_t num_relations_base) {
  const auto base = static_cast<RelationId>(num_relations_base);
  return r < base ? r + base : r - base;
}

struct SyntheticKgOptions {
  std::size_t num_entities = 32;
  std::uint64_t seed = 0;
};

// A small structured KG as TSV text. Entities sit on a grid of four rows;
// the four relations are `next` (one column right), `skip` (two columns
// right), `up` (one row up) and `diag` (next composed with up). Nothing
// wraps, so every relation is a pure translation. The seed permutes entity
// labels and line order.
std::string synthetic_kg_tsv(const SyntheticKgOptions& options);

}  // namespace kgemf

#endif  // KGEMF_GRAPH_HPP_
