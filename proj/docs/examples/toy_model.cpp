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

// A squared-distance translation model, a tail-only sampler and an L2
// penalty on entity rows, trained and evaluated on the synthetic graph.

#include <algorithm>
#include <cstdio>
#include <memory>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "kgemf/evaluation.hpp"
#include "kgemf/graph.hpp"
#include "kgemf/model.hpp"
#include "kgemf/regularizer.hpp"
#include "kgemf/sampling.hpp"
#include "kgemf/training.hpp"

namespace {

using namespace kgemf;

// f(h, r, t) = -||h + r - t||^2
class SquaredTranslation final : public Interaction {
 public:
  std::string_view name() const override { return "SquaredTranslation"; }

  std::vector<TableSpec> table_specs(std::size_t dim) const override {
    return {{"entity", TableRole::kEntity, dim}, {"relation", TableRole::kRelation, dim}};
  }

  double score(const ModelParams& p, const Triple& t) const override {
    auto h = p.table(0).row(t.head);
    auto r = p.table(1).row(t.relation);
    auto e = p.table(0).row(t.tail);
    double s = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) {
      const double d = h[i] + r[i] - e[i];
      s -= d * d;
    }
    return s;
  }

  void accumulate_gradient(const ModelParams& p, const Triple& t, double upstream,
                           Gradients& out) const override {
    const std::size_t d = p.dim();
    auto h = p.table(0).row(t.head);
    auto r = p.table(1).row(t.relation);
    auto e = p.table(0).row(t.tail);
    std::vector<double> diff(d);
    for (std::size_t i = 0; i < d; ++i) diff[i] = -2.0 * upstream * (h[i] + r[i] - e[i]);
    auto gh = out.row({0, t.head}, d);
    auto gr = out.row({1, t.relation}, d);
    auto gt = out.row({0, t.tail}, d);
    for (std::size_t i = 0; i < d; ++i) {
      gh[i] += diff[i];
      gr[i] += diff[i];
      gt[i] -= diff[i];
    }
  }
};

// Corrupts tails only, never reproducing the positive's own tail.
class DistinctTailSampler final : public NegativeSampler {
 public:
  explicit DistinctTailSampler(std::size_t num_entities) : num_entities_(num_entities) {}

  std::string_view name() const override { return "distinct-tail"; }

  NegativeBatch sample(std::span<const Triple> positives, std::size_t k,
                       std::mt19937_64& rng) const override {
    std::uniform_int_distribution<EntityId> pick(0, static_cast<EntityId>(num_entities_ - 2));
    NegativeBatch batch{k, {}, {}};
    for (const Triple& t : positives) {
      for (std::size_t i = 0; i < k; ++i) {
        EntityId e = pick(rng);
        if (e >= t.tail) ++e;
        batch.negatives.push_back({t.head, t.relation, e});
        batch.sides.push_back(CorruptionSide::kTail);
      }
    }
    return batch;
  }

 private:
  std::size_t num_entities_;
};

// lambda * sum of squared entries over the touched entity rows.
class EntityL2 final : public Regularizer {
 public:
  explicit EntityL2(double weight) : weight_(weight) {}

  std::string_view name() const override { return "entity-l2"; }

  double apply(const ModelParams& params, std::span<const RowKey> rows,
               Gradients* grads) const override {
    double penalty = 0.0;
    std::vector<RowKey> seen;
    for (const RowKey& key : rows) {
      const Table& table = params.table(key.table);
      if (table.role != TableRole::kEntity) continue;
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
      seen.push_back(key);
      auto x = table.row(key.row);
      for (double v : x) penalty += weight_ * v * v;
      if (grads != nullptr) {
        auto g = grads->row(key, table.width);
        for (std::size_t i = 0; i < x.size(); ++i) g[i] += 2.0 * weight_ * x[i];
      }
    }
    return penalty;
  }

 private:
  double weight_;
};

}  // namespace

int main() {
  register_interaction(std::make_unique<SquaredTranslation>());

  const ParseResult kg = parse_triples(synthetic_kg_tsv({}));
  const DatasetSplits splits = random_split(kg.triples, {}, 0);

  ModelOptions model;
  model.kind = "SquaredTranslation";
  model.num_entities = kg.triples.num_entities();
  model.num_relations = kg.triples.num_relations_base();
  model.dim = 16;
  ModelParams params = init_model(model);

  EvaluationOptions eval;
  eval.compute_auc = false;
  const double before = evaluate(params, splits.test.triples(), kg.triples.triples(), eval)
                            .at(Side::kBoth, RankType::kAverage)
                            .mean_reciprocal_rank;

  TrainConfig config;
  config.loss = {LossType::kMarginRanking, 1.0, 1.0, Reduction::kMean};
  config.batch_size = 32;
  config.num_negatives = 4;
  config.epochs = 200;
  config.sampler = std::make_shared<DistinctTailSampler>(model.num_entities);
  config.custom_regularizer = std::make_shared<EntityL2>(1e-4);
  train(params, splits.train, config);

  const double after = evaluate(params, splits.test.triples(), kg.triples.triples(), eval)
                           .at(Side::kBoth, RankType::kAverage)
                           .mean_reciprocal_rank;
  std::printf("MRR before %.3f, after %.3f\n", before, after);
  return after > before ? 0 : 1;
}
