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

#ifndef KGEMF_LOSS_HPP_
#define KGEMF_LOSS_HPP_

#include <span>
#include <string_view>
#include <vector>

namespace kgemf {

enum class LossType { kMarginRanking, kBCEWithLogits, kCrossEntropy, kMSE, kSoftplus, kNSSA };
enum class Reduction { kMean, kSum };

std::string_view loss_type_name(LossType type);
LossType parse_loss_type(std::string_view name);
std::string_view reduction_name(Reduction reduction);
Reduction parse_reduction(std::string_view name);

struct LossSpec {
  LossType type = LossType::kMarginRanking;
  double margin = 1.0;       // gamma: MarginRanking, NSSA
  double temperature = 1.0;  // alpha: NSSA
  Reduction reduction = Reduction::kMean;
};

// Throws kInvalidArgument when margin < 0 or temperature <= 0.
void validate_loss(const LossSpec& spec);

// Value and gradients with respect to the positive and negative scores.
struct PairLossResult {
  double value = 0.0;
  std::vector<double> d_pos;
  std::vector<double> d_neg;
};

struct LossResult {
  double value = 0.0;
  std::vector<double> d_scores;
};

// Margin ranking: reduce over pairs of max(0, margin + neg - pos). `neg`
// holds k negatives per positive, neg[j * k + i] belonging to pos[j]. The
// subgradient at the hinge is 0.
PairLossResult pairwise_loss(const LossSpec& spec, std::span<const double> pos,
                             std::span<const double> neg);

// BCEWithLogits (labels in [0, 1]), MSE, or Softplus (labels in {-1, +1}),
// reduced over elements.
LossResult pointwise_loss(const LossSpec& spec, std::span<const double> scores,
                          std::span<const double> labels);

// -log softmax(scores)[true_index] with max-shift stabilisation; gradient is
// softmax - onehot.
LossResult setwise_ce(std::span<const double> scores, std::size_t true_index);

// Cross entropy against a non-negative target row normalised to sum 1. Used
// for multi-label LCWA rows.
LossResult setwise_ce(std::span<const double> scores, std::span<const double> targets);

// softmax over i of (temperature * neg[j * k + i]) per positive j.
std::vector<double> nssa_weights(std::span<const double> neg, std::size_t k, double temperature);

// Self-adversarial negative sampling loss, reduced over positives:
//   L_j = -log sig(margin + pos_j) - sum_i w_ji log sig(-neg_ji - margin)
// The weights are constants for the gradient.
PairLossResult nssa_loss(const LossSpec& spec, std::span<const double> pos,
                         std::span<const double> neg);

// Numerically stable helpers.
double sigmoid(double x);
double softplus(double x);

}  // namespace kgemf

#endif  // KGEMF_LOSS_HPP_
