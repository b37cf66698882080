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

#include "kgemf/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "kgemf/error.hpp"

namespace kgemf {

std::string_view approach_name(TrainingApproach approach) {
  return approach == TrainingApproach::kSLCWA ? "sLCWA" : "LCWA";
}

TrainingApproach parse_approach(std::string_view name) {
  if (name == "sLCWA") return TrainingApproach::kSLCWA;
  if (name == "LCWA") return TrainingApproach::kLCWA;
  throw Error(ErrorCode::kInvalidArgument, "unknown training approach '" + std::string(name) + "'");
}

bool is_compatible(TrainingApproach approach, LossType loss) {
  switch (loss) {
    case LossType::kBCEWithLogits:
    case LossType::kSoftplus:
    case LossType::kMSE:
      return true;
    case LossType::kMarginRanking:
    case LossType::kNSSA:
      return approach == TrainingApproach::kSLCWA;
    case LossType::kCrossEntropy:
      return approach == TrainingApproach::kLCWA;
  }
  return false;
}

void check_compatible(TrainingApproach approach, LossType loss) {
  if (!is_compatible(approach, loss)) {
    throw Error(ErrorCode::kIncompatibleLoss, std::string(loss_type_name(loss)) +
                                                  " cannot be combined with " +
                                                  std::string(approach_name(approach)));
  }
}

std::string_view optimizer_kind_name(OptimizerKind kind) {
  return kind == OptimizerKind::kSGD ? "SGD" : "Adam";
}

OptimizerKind parse_optimizer_kind(std::string_view name) {
  if (name == "SGD") return OptimizerKind::kSGD;
  if (name == "Adam") return OptimizerKind::kAdam;
  throw Error(ErrorCode::kInvalidArgument, "unknown optimizer '" + std::string(name) + "'");
}

Optimizer::Optimizer(const OptimizerSpec& spec) : spec_(spec) {
  if (!(spec.learning_rate > 0.0) || !std::isfinite(spec.learning_rate)) {
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be finite and > 0");
  }
  if (spec.kind == OptimizerKind::kAdam &&
      (!(spec.beta1 >= 0.0 && spec.beta1 < 1.0) || !(spec.beta2 >= 0.0 && spec.beta2 < 1.0) ||
       !(spec.epsilon > 0.0))) {
    throw Error(ErrorCode::kInvalidArgument, "Adam needs beta1, beta2 in [0, 1) and epsilon > 0");
  }
}

void Optimizer::step(ModelParams& params, const Gradients& grads) {
  for (const auto& [key, g] : grads) {
    for (double x : g) {
      if (!std::isfinite(x)) throw Error(ErrorCode::kNonFiniteGradient, "non-finite gradient");
    }
  }
  const double lr = spec_.learning_rate;
  for (const auto& [key, g] : grads) {
    auto row = params.table(key.table).row(key.row);
    if (spec_.kind == OptimizerKind::kSGD) {
      for (std::size_t i = 0; i < row.size(); ++i) row[i] -= lr * g[i];
      continue;
    }
    RowState& s = state_[key];
    if (s.m.empty()) {
      s.m.assign(row.size(), 0.0);
      s.v.assign(row.size(), 0.0);
    }
    ++s.step;
    const double t = static_cast<double>(s.step);
    const double bc1 = 1.0 - std::pow(spec_.beta1, t);
    const double bc2 = 1.0 - std::pow(spec_.beta2, t);
    for (std::size_t i = 0; i < row.size(); ++i) {
      s.m[i] = spec_.beta1 * s.m[i] + (1.0 - spec_.beta1) * g[i];
      s.v[i] = spec_.beta2 * s.v[i] + (1.0 - spec_.beta2) * g[i] * g[i];
      const double m_hat = s.m[i] / bc1;
      const double v_hat = s.v[i] / bc2;
      row[i] -= lr * m_hat / (std::sqrt(v_hat) + spec_.epsilon);
    }
  }
  const std::vector<RowKey> keys = grads.keys();
  params.interaction().project(params, keys);
}

EarlyStopper::EarlyStopper(EarlyStopperOptions options) : options_(std::move(options)) {
  if (options_.frequency == 0) {
    throw Error(ErrorCode::kInvalidArgument, "early stopping frequency must be >= 1");
  }
  if (!(options_.relative_delta >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "relative_delta must be >= 0");
  }
}

bool EarlyStopper::should_stop(double value) {
  bool improved = false;
  if (!best_) {
    improved = !std::isnan(value);
  } else if (!std::isnan(value)) {
    const double gain = options_.maximize ? value - *best_ : *best_ - value;
    improved = gain >= options_.relative_delta * std::abs(*best_);
  }
  if (improved) {
    best_ = value;
    counter_ = 0;
    return false;
  }
  ++counter_;
  return counter_ > options_.patience;
}

void validate_train_config(const TrainConfig& config) {
  validate_loss(config.loss);
  check_compatible(config.approach, config.loss.type);
  if (config.batch_size == 0) throw Error(ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  if (config.sub_batch_size &&
      (*config.sub_batch_size == 0 || *config.sub_batch_size > config.batch_size)) {
    throw Error(ErrorCode::kInvalidArgument, "sub_batch_size must be in [1, batch_size]");
  }
  if (config.approach == TrainingApproach::kSLCWA && config.num_negatives == 0) {
    throw Error(ErrorCode::kInvalidArgument, "sLCWA needs num_negatives >= 1");
  }
}

std::vector<LcwaUnit> build_lcwa_units(const TripleSet& triples) {
  std::map<std::pair<EntityId, RelationId>, std::vector<EntityId>> groups;
  for (const Triple& t : triples.triples()) groups[{t.head, t.relation}].push_back(t.tail);
  std::vector<LcwaUnit> units;
  units.reserve(groups.size());
  for (auto& [key, tails] : groups) {
    std::sort(tails.begin(), tails.end());
    units.push_back({key.first, key.second, std::move(tails)});
  }
  return units;
}

BatchGradient accumulate_sub_batches(std::size_t batch_size, std::size_t sub_batch_size,
                                     const SubBatchFn& grad_fn) {
  if (sub_batch_size == 0 || (batch_size > 0 && sub_batch_size > batch_size)) {
    throw Error(ErrorCode::kInvalidArgument, "sub_batch_size must be in [1, batch_size]");
  }
  if (sub_batch_size >= batch_size) return grad_fn(0, batch_size);
  BatchGradient total;
  for (std::size_t begin = 0; begin < batch_size; begin += sub_batch_size) {
    const std::size_t end = std::min(batch_size, begin + sub_batch_size);
    BatchGradient part = grad_fn(begin, end);
    total.loss += part.loss;
    total.gradients.add(part.gradients);
  }
  return total;
}

std::size_t loss_terms(TrainingApproach approach, LossType loss, std::size_t batch_items,
                       std::size_t num_negatives, std::size_t num_entities) {
  if (approach == TrainingApproach::kLCWA) {
    return loss == LossType::kCrossEntropy ? batch_items : batch_items * num_entities;
  }
  switch (loss) {
    case LossType::kMarginRanking: return batch_items * num_negatives;
    case LossType::kNSSA: return batch_items;
    default: return batch_items * (1 + num_negatives);
  }
}

namespace {

LossSpec as_sum(LossSpec spec) {
  spec.reduction = Reduction::kSum;
  return spec;
}

void chain(const ModelParams& params, std::span<const Triple> triples,
           std::span<const double> d_scores, double scale, Gradients& out) {
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const double u = d_scores[i] * scale;
    if (u != 0.0) accumulate_score_grad(params, triples[i], u, out);
  }
}

}  // namespace

BatchGradient slcwa_batch_gradient(const ModelParams& params, std::span<const Triple> positives,
                                   std::span<const Triple> negatives, const LossSpec& loss,
                                   double scale) {
  BatchGradient out;
  if (positives.empty()) return out;
  const Interaction& model = params.interaction();
  std::vector<double> pos(positives.size()), neg(negatives.size());
  for (std::size_t i = 0; i < positives.size(); ++i) pos[i] = model.score(params, positives[i]);
  for (std::size_t i = 0; i < negatives.size(); ++i) neg[i] = model.score(params, negatives[i]);
  const LossSpec spec = as_sum(loss);

  switch (loss.type) {
    case LossType::kMarginRanking:
    case LossType::kNSSA: {
      const PairLossResult r = loss.type == LossType::kMarginRanking
                                   ? pairwise_loss(spec, pos, neg)
                                   : nssa_loss(spec, pos, neg);
      out.loss = r.value * scale;
      chain(params, positives, r.d_pos, scale, out.gradients);
      chain(params, negatives, r.d_neg, scale, out.gradients);
      break;
    }
    case LossType::kBCEWithLogits:
    case LossType::kSoftplus:
    case LossType::kMSE: {
      const double negative_label = loss.type == LossType::kSoftplus ? -1.0 : 0.0;
      std::vector<double> scores = pos;
      scores.insert(scores.end(), neg.begin(), neg.end());
      std::vector<double> labels(pos.size(), 1.0);
      labels.resize(scores.size(), negative_label);
      const LossResult r = pointwise_loss(spec, scores, labels);
      out.loss = r.value * scale;
      std::span<const double> d(r.d_scores);
      chain(params, positives, d.first(pos.size()), scale, out.gradients);
      chain(params, negatives, d.subspan(pos.size()), scale, out.gradients);
      break;
    }
    case LossType::kCrossEntropy:
      check_compatible(TrainingApproach::kSLCWA, loss.type);
  }
  return out;
}

BatchGradient lcwa_batch_gradient(const ModelParams& params, std::span<const LcwaUnit> units,
                                  const LossSpec& loss, double scale) {
  BatchGradient out;
  const LossSpec spec = as_sum(loss);
  const std::size_t n = params.num_entities();
  const Interaction& model = params.interaction();
  std::vector<double> scores(n), labels(n);
  for (const LcwaUnit& unit : units) {
    Triple t{unit.head, unit.relation, 0};
    for (std::size_t e = 0; e < n; ++e) {
      t.tail = static_cast<EntityId>(e);
      scores[e] = model.score(params, t);
    }
    const double off = loss.type == LossType::kSoftplus ? -1.0 : 0.0;
    std::fill(labels.begin(), labels.end(), off);
    for (EntityId tail : unit.tails) labels[tail] = 1.0;

    const LossResult r = loss.type == LossType::kCrossEntropy
                             ? setwise_ce(scores, std::vector<double>(labels))
                             : pointwise_loss(spec, scores, labels);
    out.loss += r.value * scale;
    for (std::size_t e = 0; e < n; ++e) {
      const double u = r.d_scores[e] * scale;
      if (u == 0.0) continue;
      t.tail = static_cast<EntityId>(e);
      accumulate_score_grad(params, t, u, out.gradients);
    }
  }
  return out;
}

namespace {

TripleSet prepare_training_set(const ModelParams& params, const TripleSet& train,
                               const TrainConfig& config) {
  validate_train_config(config);
  if (params.inverse_relations() != config.inverse_relations) {
    throw Error(ErrorCode::kInvalidArgument,
                "model and training config disagree on inverse relations");
  }
  TripleSet data = (config.inverse_relations && !train.inverses_added())
                       ? add_inverse_relations(train)
                       : train;
  if (data.num_entities() > params.num_entities() ||
      data.num_relations() > params.num_relations()) {
    throw Error(ErrorCode::kIdOutOfRange, "training triples exceed the model's id ranges");
  }
  return data;
}

void apply_regularizer(const ModelParams& params, const Regularizer& regularizer,
                       std::vector<RowKey>& rows, BatchGradient& batch) {
  if (rows.empty()) return;
  batch.loss += regularizer.apply(params, rows, &batch.gradients);
  rows.clear();
}

// Shared epoch loop; `run_batch(indices)` returns the batch objective.
template <typename RunBatch>
TrainResult run_epochs(ModelParams& params, std::size_t num_items, const TrainConfig& config,
                       std::mt19937_64& rng, EarlyStopper* stopper, const EvalFn& eval,
                       RunBatch&& run_batch) {
  TrainResult result;
  Optimizer optimizer(config.optimizer);
  std::vector<std::size_t> order(num_items);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < num_items; start += config.batch_size) {
      const std::size_t end = std::min(num_items, start + config.batch_size);
      BatchGradient batch =
          run_batch(std::span<const std::size_t>(order).subspan(start, end - start));
      if (!std::isfinite(batch.loss)) {
        throw Error(ErrorCode::kLossDiverged,
                    "non-finite loss in epoch " + std::to_string(epoch + 1));
      }
      optimizer.step(params, batch.gradients);
      epoch_loss += batch.loss;
      ++batches;
    }
    result.loss_history.push_back(batches > 0 ? epoch_loss / static_cast<double>(batches) : 0.0);
    result.epochs_run = epoch + 1;
    if (stopper != nullptr && eval && (epoch + 1) % stopper->options().frequency == 0) {
      if (stopper->should_stop(eval(params))) {
        result.stopped_epoch = epoch + 1;
        break;
      }
    }
  }
  return result;
}

std::pair<std::shared_ptr<const Regularizer>, bool> resolve_regularizer(
    const TrainConfig& config) {
  if (config.custom_regularizer) return {config.custom_regularizer, true};
  return {make_regularizer(config.regularizer),
          config.regularizer.kind != RegularizerKind::kNoOp};
}

}  // namespace

TrainResult train_slcwa(ModelParams& params, const TripleSet& train, const TrainConfig& config,
                        EarlyStopper* stopper, const EvalFn& eval) {
  if (config.approach != TrainingApproach::kSLCWA) {
    throw Error(ErrorCode::kInvalidArgument, "train_slcwa called with a non-sLCWA config");
  }
  const TripleSet data = prepare_training_set(params, train, config);
  const std::size_t k = config.num_negatives;
  const std::shared_ptr<const NegativeSampler> sampler =
      config.sampler ? config.sampler
                     : std::make_shared<UniformNegativeSampler>(params.num_entities(),
                                                                config.corruption);
  const auto [regularizer, regularize] = resolve_regularizer(config);
  std::mt19937_64 rng(config.seed);
  std::vector<Triple> positives;
  std::vector<RowKey> rows;

  return run_epochs(params, data.size(), config, rng, stopper, eval,
                    [&](std::span<const std::size_t> idx) {
    positives.clear();
    for (std::size_t i : idx) positives.push_back(data[i]);
    const NegativeBatch negatives = sampler->sample(positives, k, rng);
    if (negatives.negatives.size() != positives.size() * k) {
      throw Error(ErrorCode::kShapeMismatch, std::string("sampler '") +
                                                 std::string(sampler->name()) +
                                                 "' returned the wrong number of negatives");
    }
    const double scale =
        config.loss.reduction == Reduction::kMean
            ? 1.0 / static_cast<double>(loss_terms(TrainingApproach::kSLCWA, config.loss.type,
                                                   positives.size(), k, params.num_entities()))
            : 1.0;
    const std::span<const Triple> pos(positives);
    const std::span<const Triple> neg(negatives.negatives);
    BatchGradient batch = accumulate_sub_batches(
        pos.size(), std::min(pos.size(), config.sub_batch_size.value_or(pos.size())),
        [&](std::size_t b, std::size_t e) {
          return slcwa_batch_gradient(params, pos.subspan(b, e - b),
                                      neg.subspan(b * k, (e - b) * k), config.loss, scale);
        });
    if (regularize) {
      for (const Triple& t : pos) touched_rows(params, t, rows);
      for (const Triple& t : neg) touched_rows(params, t, rows);
      apply_regularizer(params, *regularizer, rows, batch);
    }
    return batch;
  });
}

TrainResult train_lcwa(ModelParams& params, const TripleSet& train, const TrainConfig& config,
                       EarlyStopper* stopper, const EvalFn& eval, const UnitLog& unit_log) {
  if (config.approach != TrainingApproach::kLCWA) {
    throw Error(ErrorCode::kInvalidArgument, "train_lcwa called with a non-LCWA config");
  }
  const TripleSet data = prepare_training_set(params, train, config);
  const std::vector<LcwaUnit> units = build_lcwa_units(data);
  const auto [regularizer, regularize] = resolve_regularizer(config);
  std::mt19937_64 rng(config.seed);
  std::vector<LcwaUnit> batch_units;
  std::vector<RowKey> rows;

  return run_epochs(params, units.size(), config, rng, stopper, eval,
                    [&](std::span<const std::size_t> idx) {
    batch_units.clear();
    for (std::size_t i : idx) {
      batch_units.push_back(units[i]);
      if (unit_log) unit_log(units[i]);
    }
    const double scale =
        config.loss.reduction == Reduction::kMean
            ? 1.0 / static_cast<double>(loss_terms(TrainingApproach::kLCWA, config.loss.type,
                                                   batch_units.size(), 0, params.num_entities()))
            : 1.0;
    const std::span<const LcwaUnit> span(batch_units);
    BatchGradient batch = accumulate_sub_batches(
        span.size(), std::min(span.size(), config.sub_batch_size.value_or(span.size())),
        [&](std::size_t b, std::size_t e) {
          return lcwa_batch_gradient(params, span.subspan(b, e - b), config.loss, scale);
        });
    if (regularize) {
      for (const LcwaUnit& u : span) {
        for (std::uint32_t e = 0; e < params.num_entities(); ++e) {
          touched_rows(params, {u.head, u.relation, e}, rows);
        }
      }
      apply_regularizer(params, *regularizer, rows, batch);
    }
    return batch;
  });
}

TrainResult train(ModelParams& params, const TripleSet& train_set, const TrainConfig& config,
                  EarlyStopper* stopper, const EvalFn& eval) {
  return config.approach == TrainingApproach::kSLCWA
             ? train_slcwa(params, train_set, config, stopper, eval)
             : train_lcwa(params, train_set, config, stopper, eval);
}

}  // namespace kgemf
