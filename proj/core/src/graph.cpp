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

#include "kgemf/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

#include "kgemf/error.hpp"

namespace kgemf {

EntityId Vocabulary::add_entity(std::string_view label) {
  auto [it, inserted] = entity_index_.try_emplace(
      std::string(label), static_cast<EntityId>(entities_.size()));
  if (inserted) entities_.emplace_back(label);
  return it->second;
}

RelationId Vocabulary::add_relation(std::string_view label) {
  auto [it, inserted] = relation_index_.try_emplace(
      std::string(label), static_cast<RelationId>(relations_.size()));
  if (inserted) relations_.emplace_back(label);
  return it->second;
}

std::optional<EntityId> Vocabulary::entity_id(std::string_view label) const {
  auto it = entity_index_.find(std::string(label));
  if (it == entity_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<RelationId> Vocabulary::relation_id(std::string_view label) const {
  auto it = relation_index_.find(std::string(label));
  if (it == relation_index_.end()) return std::nullopt;
  return it->second;
}

TripleSet::TripleSet(std::vector<Triple> triples, std::size_t num_entities,
                     std::size_t num_relations_base, bool inverses_added)
    : triples_(std::move(triples)),
      num_entities_(num_entities),
      num_relations_base_(num_relations_base),
      inverses_added_(inverses_added) {
  const std::size_t rel_limit = num_relations();
  std::unordered_set<Triple, TripleHash> seen;
  seen.reserve(triples_.size());
  for (const Triple& t : triples_) {
    if (t.head >= num_entities_ || t.tail >= num_entities_ || t.relation >= rel_limit) {
      throw Error(ErrorCode::kIdOutOfRange, "triple (" + std::to_string(t.head) + ", " +
                                                std::to_string(t.relation) + ", " +
                                                std::to_string(t.tail) + ") out of range");
    }
    if (!seen.insert(t).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate triple in TripleSet");
    }
  }
}

namespace {

// Splits one line into exactly three tab-separated fields.
bool split_fields(std::string_view line, std::array<std::string_view, 3>& out) {
  std::size_t start = 0;
  for (int i = 0; i < 2; ++i) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) return false;
    out[i] = line.substr(start, tab - start);
    start = tab + 1;
  }
  out[2] = line.substr(start);
  return out[2].find('\t') == std::string_view::npos;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) fn(line, line_no);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

}  // namespace

ParseResult parse_triples(std::string_view text) { return parse_triples(text, Vocabulary{}); }

ParseResult parse_triples(std::string_view text, Vocabulary vocabulary) {
  std::vector<Triple> triples;
  std::unordered_set<Triple, TripleHash> seen;
  std::size_t duplicates = 0;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    std::array<std::string_view, 3> f;
    if (!split_fields(line, f)) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) + ": expected 3 tab-separated fields");
    }
    Triple t;
    t.head = vocabulary.add_entity(f[0]);
    t.relation = vocabulary.add_relation(f[1]);
    t.tail = vocabulary.add_entity(f[2]);
    if (seen.insert(t).second) {
      triples.push_back(t);
    } else {
      ++duplicates;
    }
  });
  if (triples.empty()) throw Error(ErrorCode::kEmptyDataset, "no triples found");
  ParseResult result;
  result.triples = TripleSet(std::move(triples), vocabulary.num_entities(),
                             vocabulary.num_relations());
  result.vocabulary = std::move(vocabulary);
  result.duplicates_removed = duplicates;
  return result;
}

TripleSet map_triples(std::string_view text, const Vocabulary& vocabulary) {
  std::vector<Triple> triples;
  std::unordered_set<Triple, TripleHash> seen;
  std::vector<std::string> unknown;
  auto note_unknown = [&](std::string_view label) {
    if (std::find(unknown.begin(), unknown.end(), label) == unknown.end()) {
      unknown.emplace_back(label);
    }
  };
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    std::array<std::string_view, 3> f;
    if (!split_fields(line, f)) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) + ": expected 3 tab-separated fields");
    }
    auto h = vocabulary.entity_id(f[0]);
    auto r = vocabulary.relation_id(f[1]);
    auto t = vocabulary.entity_id(f[2]);
    if (!h) note_unknown(f[0]);
    if (!r) note_unknown(f[1]);
    if (!t) note_unknown(f[2]);
    if (h && r && t) {
      const Triple triple{*h, *r, *t};
      if (seen.insert(triple).second) triples.push_back(triple);
    }
  });
  if (!unknown.empty()) {
    std::string msg = "labels not in training vocabulary:";
    for (const auto& u : unknown) msg += " " + u;
    throw Error(ErrorCode::kUnknownEntity, msg);
  }
  if (triples.empty()) throw Error(ErrorCode::kEmptyDataset, "no triples found");
  return TripleSet(std::move(triples), vocabulary.num_entities(), vocabulary.num_relations());
}

std::string serialize_triples(const TripleSet& triples, const Vocabulary& vocabulary) {
  std::string out;
  for (const Triple& t : triples.triples()) {
    if (t.relation >= triples.num_relations_base()) continue;
    out += vocabulary.entity_label(t.head);
    out += '\t';
    out += vocabulary.relation_label(t.relation);
    out += '\t';
    out += vocabulary.entity_label(t.tail);
    out += '\n';
  }
  return out;
}

TripleSet with_counts(const TripleSet& triples, std::size_t num_entities,
                      std::size_t num_relations_base) {
  if (triples.inverses_added()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot re-count an inverse-augmented set");
  }
  return TripleSet(triples.triples(), num_entities, num_relations_base);
}

namespace {

// Largest-remainder apportionment of n items over the three ratios.
std::array<std::size_t, 3> apportion(std::size_t n, const SplitRatios& ratios) {
  const std::array<double, 3> r{ratios.train, ratios.validation, ratios.test};
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double exact = r[i] * static_cast<double>(n);
    sizes[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainder[i] = exact - static_cast<double>(sizes[i]);
    assigned += sizes[i];
  }
  while (assigned < n) {
    int best = 0;
    for (int i = 1; i < 3; ++i) {
      if (remainder[i] > remainder[best]) best = i;
    }
    ++sizes[best];
    remainder[best] = -1.0;
    ++assigned;
  }
  while (assigned > n) {
    for (int i = 2; i >= 0 && assigned > n; --i) {
      if (sizes[i] > 0) {
        --sizes[i];
        --assigned;
      }
    }
  }
  return sizes;
}

}  // namespace

DatasetSplits random_split(const TripleSet& triples, const SplitRatios& ratios,
                           std::uint64_t seed, SplitReport* report) {
  if (triples.empty()) throw Error(ErrorCode::kEmptyDataset, "cannot split an empty set");
  if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "split ratios must be >= 0 and sum to 1");
  }
  if (ratios.train == 0.0) {
    throw Error(ErrorCode::kInfeasibleSplit,
                "train ratio is 0 but every entity and relation must occur in train");
  }

  const std::size_t n = triples.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto sizes = apportion(n, ratios);
  // part[i]: 0 train, 1 validation, 2 test, indexed by shuffled position.
  std::vector<int> part(n);
  for (std::size_t i = 0; i < n; ++i) {
    part[i] = i < sizes[0] ? 0 : (i < sizes[0] + sizes[1] ? 1 : 2);
  }

  std::vector<bool> entity_seen(triples.num_entities(), false);
  std::vector<bool> relation_seen(triples.num_relations(), false);
  for (std::size_t i = 0; i < n; ++i) {
    if (part[i] != 0) continue;
    const Triple& t = triples[order[i]];
    entity_seen[t.head] = entity_seen[t.tail] = relation_seen[t.relation] = true;
  }
  auto uncovered = [&](const Triple& t) {
    int c = 0;
    if (!entity_seen[t.head]) ++c;
    if (t.tail != t.head && !entity_seen[t.tail]) ++c;
    if (!relation_seen[t.relation]) ++c;
    return c;
  };

  std::size_t moved = 0;
  for (int threshold = 3; threshold >= 1; --threshold) {
    for (std::size_t i = 0; i < n; ++i) {
      if (part[i] == 0) continue;
      const Triple& t = triples[order[i]];
      if (uncovered(t) >= threshold) {
        part[i] = 0;
        entity_seen[t.head] = entity_seen[t.tail] = relation_seen[t.relation] = true;
        ++moved;
      }
    }
  }

  std::array<std::vector<Triple>, 3> buckets;
  for (std::size_t i = 0; i < n; ++i) buckets[part[i]].push_back(triples[order[i]]);

  if (report != nullptr) {
    report->target_sizes = sizes;
    report->moved_to_train = moved;
  }
  const std::size_t ne = triples.num_entities();
  const std::size_t nr = triples.num_relations_base();
  const bool inv = triples.inverses_added();
  return DatasetSplits{TripleSet(std::move(buckets[0]), ne, nr, inv),
                       TripleSet(std::move(buckets[1]), ne, nr, inv),
                       TripleSet(std::move(buckets[2]), ne, nr, inv)};
}

TripleSet add_inverse_relations(const TripleSet& triples) {
  if (triples.inverses_added()) {
    throw Error(ErrorCode::kAlreadyAugmented, "inverse relations already present");
  }
  const std::size_t base = triples.num_relations_base();
  std::vector<Triple> out = triples.triples();
  out.reserve(2 * triples.size());
  for (const Triple& t : triples.triples()) {
    out.push_back({t.tail, inverse_relation(t.relation, base), t.head});
  }
  return TripleSet(std::move(out), triples.num_entities(), base, true);
}

std::string synthetic_kg_tsv(const SyntheticKgOptions& options) {
  constexpr std::size_t kRows = 4;
  const std::size_t n = options.num_entities;
  if (n < 2 * kRows) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic KG needs at least 8 entities");
  }
  const std::size_t width = (n + kRows - 1) / kRows;
  auto id = [&](std::size_t x, std::size_t y) { return y * width + x; };

  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), std::size_t{0});
  std::shuffle(label.begin(), label.end(), rng);

  std::vector<std::string> lines;
  auto emit = [&](std::size_t h, const char* rel, std::size_t t) {
    if (h >= n || t >= n) return;
    lines.push_back("e" + std::to_string(label[h]) + "\t" + rel + "\te" +
                    std::to_string(label[t]) + "\n");
  };
  for (std::size_t y = 0; y < kRows; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const std::size_t e = id(x, y);
      if (x + 1 < width) emit(e, "next", id(x + 1, y));
      if (x + 2 < width) emit(e, "skip", id(x + 2, y));
      if (y + 1 < kRows) {
        emit(e, "up", id(x, y + 1));
        if (x + 1 < width) emit(e, "diag", id(x + 1, y + 1));
      }
    }
  }
  std::shuffle(lines.begin(), lines.end(), rng);
  std::string out;
  for (const auto& l : lines) out += l;
  return out;
}

}  // namespace kgemf
