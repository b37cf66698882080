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

#ifndef KGEMF_MODEL_HPP_
#define KGEMF_MODEL_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgemf/graph.hpp"

namespace kgemf {

enum class InitScheme { kUniformXavier, kNormalXavier };

std::string_view init_scheme_name(InitScheme scheme);
InitScheme parse_init_scheme(std::string_view name);

enum class TableRole { kEntity, kRelation };

struct TableSpec {
  std::string name;
  TableRole role = TableRole::kEntity;
  std::size_t width = 0;
};

// Row-major embedding table.
struct Table {
  std::string name;
  TableRole role = TableRole::kEntity;
  std::size_t rows = 0;
  std::size_t width = 0;
  std::vector<double> values;

  std::span<double> row(std::size_t i) { return {values.data() + i * width, width}; }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * width, width}; }

  friend bool operator==(const Table&, const Table&) = default;
};

struct RowKey {
  std::uint32_t table = 0;
  std::uint32_t row = 0;

  friend auto operator<=>(const RowKey&, const RowKey&) = default;
};

// Sparse per-row gradient. Rows are kept ordered by key, so iteration and
// merging happen in a fixed order regardless of insertion history.
class Gradients {
 public:
  using Map = std::map<RowKey, std::vector<double>>;

  // Returns the accumulator for `key`, zero-initialised on first touch.
  std::span<double> row(RowKey key, std::size_t width);
  const std::vector<double>* find(RowKey key) const;

  void add(const Gradients& other);
  void scale(double factor);

  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  Map::const_iterator begin() const { return rows_.begin(); }
  Map::const_iterator end() const { return rows_.end(); }
  std::vector<RowKey> keys() const;

 private:
  Map rows_;
};

class ModelParams;

// Unified interaction-model API. An interaction declares its tables, scores
// a single triple and accumulates upstream * d(score)/d(parameters) into a
// sparse gradient. Every model returns "higher = more plausible".
class Interaction {
 public:
  virtual ~Interaction() = default;

  virtual std::string_view name() const = 0;
  virtual std::vector<TableSpec> table_specs(std::size_t dim) const = 0;
  virtual double score(const ModelParams& params, const Triple& triple) const = 0;
  virtual void accumulate_gradient(const ModelParams& params, const Triple& triple,
                                   double upstream, Gradients& out) const = 0;

  // Default: Xavier init of every table, treating each table as a
  // (rows x width) matrix.
  virtual void initialize(ModelParams& params, InitScheme scheme, std::mt19937_64& rng) const;

  // Restores parameter constraints on the given rows after an update.
  virtual void project(ModelParams& params, std::span<const RowKey> rows) const;
};

// Built-ins are TransE, DistMult, ComplEx, RotatE, SimplE and TransH.
// Throws kInvalidArgument for unknown names.
const Interaction& find_interaction(std::string_view name);

// Adds a user-defined interaction to the registry. The name must be unique.
void register_interaction(std::unique_ptr<Interaction> interaction);

std::vector<std::string> interaction_names();

struct ModelOptions {
  std::string kind = "TransE";
  std::size_t num_entities = 0;
  // Base relation count; the model allocates twice as many rows when
  // `inverse_relations` is set.
  std::size_t num_relations = 0;
  std::size_t dim = 0;
  bool inverse_relations = false;
  int p_norm = 2;
  InitScheme init = InitScheme::kUniformXavier;
  std::uint64_t seed = 0;
};

class ModelParams {
 public:
  ModelParams() = default;

  // Allocates zero-filled tables. Throws kInvalidArgument on dim == 0,
  // zero counts or an unsupported p_norm.
  explicit ModelParams(const ModelOptions& options);

  const Interaction& interaction() const { return *interaction_; }
  const std::string& kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  std::size_t num_entities() const { return num_entities_; }
  std::size_t num_relations() const {
    return inverse_relations_ ? 2 * num_relations_base_ : num_relations_base_;
  }
  std::size_t num_relations_base() const { return num_relations_base_; }
  bool inverse_relations() const { return inverse_relations_; }
  int p_norm() const { return p_norm_; }

  std::vector<Table>& tables() { return tables_; }
  const std::vector<Table>& tables() const { return tables_; }
  Table& table(std::size_t i) { return tables_.at(i); }
  const Table& table(std::size_t i) const { return tables_.at(i); }
  std::size_t max_row_width() const;
  std::size_t num_parameters() const;

  friend bool operator==(const ModelParams& a, const ModelParams& b) {
    return a.kind_ == b.kind_ && a.dim_ == b.dim_ && a.num_entities_ == b.num_entities_ &&
           a.num_relations_base_ == b.num_relations_base_ &&
           a.inverse_relations_ == b.inverse_relations_ && a.p_norm_ == b.p_norm_ &&
           a.tables_ == b.tables_;
  }

 private:
  const Interaction* interaction_ = nullptr;
  std::string kind_;
  std::size_t dim_ = 0;
  std::size_t num_entities_ = 0;
  std::size_t num_relations_base_ = 0;
  bool inverse_relations_ = false;
  int p_norm_ = 2;
  std::vector<Table> tables_;
};

// Allocates and initialises a model; deterministic in `options.seed`.
ModelParams init_model(const ModelOptions& options);

// Dense score matrix, one row of |E| scores per query.
struct ScoreMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
};

using HeadRelation = std::pair<EntityId, RelationId>;
using RelationTail = std::pair<RelationId, EntityId>;

std::vector<double> score_hrt(const ModelParams& params, std::span<const Triple> batch);

ScoreMatrix score_all_tails(const ModelParams& params, std::span<const HeadRelation> pairs);

// With inverse relations this is score_all_tails on (t, r + |R|); the
// relation must then come from the base block (kInverseNotAvailable).
ScoreMatrix score_all_heads(const ModelParams& params, std::span<const RelationTail> pairs);

// Sum over j of upstream[j] * d score(batch[j]) / d params, restricted to
// the rows the batch touches.
Gradients score_grad(const ModelParams& params, std::span<const Triple> batch,
                     std::span<const double> upstream);

// Adds `upstream * grad score(triple)` into `out` without validation; the
// training loop uses this on batches it has already checked.
void accumulate_score_grad(const ModelParams& params, const Triple& triple, double upstream,
                           Gradients& out);

// Rows of every table that scoring `triple` reads.
void touched_rows(const ModelParams& params, const Triple& triple, std::vector<RowKey>& out);

void check_triple(const ModelParams& params, const Triple& triple);

}  // namespace kgemf

#endif  // KGEMF_MODEL_HPP_
