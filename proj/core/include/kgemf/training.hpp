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

#ifndef KGEMF_TRAINING_HPP_
#define KGEMF_TRAINING_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgemf/graph.hpp"
#include "kgemf/loss.hpp"
#include "kgemf/model.hpp"
#include "kgemf/regularizer.hpp"
#include "kgemf/sampling.hpp"

namespace kgemf {

enum class TrainingApproach { kSLCWA, kLCWA };

std::string_view approach_name(TrainingApproach approach);
TrainingApproach parse_approach(std::string_view name);

// sLCWA admits MarginRanking, NSSA, BCEWithLogits, Softplus and MSE; LCWA
// admits BCEWithLogits, CrossEntropy, Softplus and MSE.
bool is_compatible(TrainingApproach approach, LossType loss);

// Throws kIncompatibleLoss naming the pair.
void check_compatible(TrainingApproach approach, LossType loss);

enum class OptimizerKind { kSGD, kAdam };

std::string_view optimizer_kind_name(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(std::string_view name);

struct OptimizerSpec {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Sparse optimizer: only rows present in the gradient are read or written.
// Adam keeps first/second moments and a step counter per touched row,
// created lazily, and applies bias correction with the row's own counter.
class Optimizer {
 public:
  explicit Optimizer(const OptimizerSpec& spec);

  // Throws kNonFiniteGradient before touching any parameter. After the
  // update the interaction's constraints are restored on the touched rows.
  void step(ModelParams& params, const Gradients& grads);

  const OptimizerSpec& spec() const { return spec_; }
  std::size_t num_tracked_rows() const { return state_.size(); }

 private:
  struct RowState {
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t step = 0;
  };

  OptimizerSpec spec_;
  std::map<RowKey, RowState> state_;
};

struct EarlyStopperOptions {
  std::size_t patience = 2;
  std::size_t frequency = 10;  // epochs between evaluations
  double relative_delta = 0.01;
  std::string metric = "both.average.mean_reciprocal_rank";
  bool maximize = true;
};

// A new value improves on the best when its relative gain in the configured
// direction is at least `relative_delta` (the boundary counts). The first
// value always improves. should_stop returns true once the number of
// consecutive non-improving values exceeds `patience`.
class EarlyStopper {
 public:
  explicit EarlyStopper(EarlyStopperOptions options);

  bool should_stop(double value);

  const EarlyStopperOptions& options() const { return options_; }
  std::optional<double> best() const { return best_; }
  std::size_t counter() const { return counter_; }

 private:
  EarlyStopperOptions options_;
  std::optional<double> best_;
  std::size_t counter_ = 0;
};

struct TrainConfig {
  TrainingApproach approach = TrainingApproach::kSLCWA;
  LossSpec loss;
  OptimizerSpec optimizer;
  std::size_t batch_size = 64;
  std::optional<std::size_t> sub_batch_size;
  std::size_t num_negatives = 1;
  std::size_t epochs = 100;
  std::uint64_t seed = 0;
  RegularizerSpec regularizer;
  bool inverse_relations = false;
  CorruptionMode corruption = CorruptionMode::kBoth;
  // User components. When set they replace the uniform sampler built from
  // `corruption` and the regularizer built from `regularizer`.
  std::shared_ptr<const NegativeSampler> sampler;
  std::shared_ptr<const Regularizer> custom_regularizer;
};

// Throws kInvalidArgument / kIncompatibleLoss on an inconsistent config.
void validate_train_config(const TrainConfig& config);

// An LCWA training unit: one (head, relation) pair with all its known tails.
struct LcwaUnit {
  EntityId head = 0;
  RelationId relation = 0;
  std::vector<EntityId> tails;
};

// Units sorted by (head, relation). With an inverse-augmented set the
// head-prediction queries appear as (t, r_inv) units, so every unit is a
// tail-prediction unit.
std::vector<LcwaUnit> build_lcwa_units(const TripleSet& triples);

struct BatchGradient {
  double loss = 0.0;
  Gradients gradients;
};

using SubBatchFn = std::function<BatchGradient(std::size_t begin, std::size_t end)>;

// Runs grad_fn over [0, s), [s, 2s), ... and sums losses and gradients.
// With a sum-reduced (or externally scaled) objective the result equals a
// single grad_fn(0, batch_size) call up to floating-point reassociation.
BatchGradient accumulate_sub_batches(std::size_t batch_size, std::size_t sub_batch_size,
                                     const SubBatchFn& grad_fn);

// Loss and parameter gradient of one sLCWA slice. `negatives` holds k
// negatives per positive. Losses are summed and multiplied by `scale`, so a
// mean over the full batch is obtained with scale = 1 / loss_terms(...).
BatchGradient slcwa_batch_gradient(const ModelParams& params, std::span<const Triple> positives,
                                   std::span<const Triple> negatives, const LossSpec& loss,
                                   double scale);

// Same for a slice of LCWA units, each scored against every entity.
BatchGradient lcwa_batch_gradient(const ModelParams& params, std::span<const LcwaUnit> units,
                                  const LossSpec& loss, double scale);

// Number of terms a mean reduction divides by for a batch of `batch_items`
// positives (sLCWA) or units (LCWA).
std::size_t loss_terms(TrainingApproach approach, LossType loss, std::size_t batch_items,
                       std::size_t num_negatives, std::size_t num_entities);

struct TrainResult {
  std::vector<double> loss_history;  // mean batch loss per completed epoch
  std::size_t epochs_run = 0;
  std::optional<std::size_t> stopped_epoch;
};

using EvalFn = std::function<double(const ModelParams&)>;
using UnitLog = std::function<void(const LcwaUnit&)>;

// Early stopping is active when both `stopper` and `eval` are given: eval
// runs after every `frequency` epochs and its value feeds the stopper.
TrainResult train_slcwa(ModelParams& params, const TripleSet& train, const TrainConfig& config,
                        EarlyStopper* stopper = nullptr, const EvalFn& eval = {});

TrainResult train_lcwa(ModelParams& params, const TripleSet& train, const TrainConfig& config,
                       EarlyStopper* stopper = nullptr, const EvalFn& eval = {},
                       const UnitLog& unit_log = {});

// Dispatches on config.approach.
TrainResult train(ModelParams& params, const TripleSet& train, const TrainConfig& config,
                  EarlyStopper* stopper = nullptr, const EvalFn& eval = {});

}  // namespace kgemf

#endif  // KGEMF_TRAINING_HPP_
