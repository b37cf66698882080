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

#include "kgemf/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kgemf/error.hpp"

namespace kgemf {

std::string_view loss_type_name(LossType type) {
  switch (type) {
    case LossType::kMarginRanking: return "MarginRanking";
    case LossType::kBCEWithLogits: return "BCEWithLogits";
    case LossType::kCrossEntropy: return "CrossEntropy";
    case LossType::kMSE: return "MSE";
    case LossType::kSoftplus: return "Softplus";
    case LossType::kNSSA: return "NSSA";
  }
  return "MarginRanking";
}

LossType parse_loss_type(std::string_view name) {
  for (auto type : {LossType::kMarginRanking, LossType::kBCEWithLogits, LossType::kCrossEntropy,
                    LossType::kMSE, LossType::kSoftplus, LossType::kNSSA}) {
    if (loss_type_name(type) == name) return type;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown loss '" + std::string(name) + "'");
}

std::string_view reduction_name(Reduction reduction) {
  return reduction == Reduction::kMean ? "mean" : "sum";
}

Reduction parse_reduction(std::string_view name) {
  if (name == "mean") return Reduction::kMean;
  if (name == "sum") return Reduction::kSum;
  throw Error(ErrorCode::kInvalidArgument, "unknown reduction '" + std::string(name) + "'");
}

void validate_loss(const LossSpec& spec) {
  if (!(spec.margin >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "margin must be >= 0");
  if (!(spec.temperature > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be > 0");
  }
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

namespace {

// Scale factor turning a sum over n terms into the configured reduction.
double reduction_scale(Reduction reduction, std::size_t n) {
  if (reduction == Reduction::kSum || n == 0) return 1.0;
  return 1.0 / static_cast<double>(n);
}

std::size_t negatives_per_positive(std::size_t num_pos, std::size_t num_neg) {
  if (num_pos == 0) {
    if (num_neg != 0) throw Error(ErrorCode::kShapeMismatch, "negatives without positives");
    return 0;
  }
  if (num_neg == 0 || num_neg % num_pos != 0) {
    throw Error(ErrorCode::kShapeMismatch,
                "negative count must be a positive multiple of the positive count");
  }
  return num_neg / num_pos;
}

}  // namespace

PairLossResult pairwise_loss(const LossSpec& spec, std::span<const double> pos,
                             std::span<const double> neg) {
  const std::size_t k = negatives_per_positive(pos.size(), neg.size());
  PairLossResult out;
  out.d_pos.assign(pos.size(), 0.0);
  out.d_neg.assign(neg.size(), 0.0);
  const double scale = reduction_scale(spec.reduction, neg.size());
  double total = 0.0;
  for (std::size_t j = 0; j < pos.size(); ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      const double hinge = spec.margin + neg[j * k + i] - pos[j];
      if (hinge > 0.0) {
        total += hinge;
        out.d_neg[j * k + i] = scale;
        out.d_pos[j] -= scale;
      }
    }
  }
  out.value = total * scale;
  return out;
}

LossResult pointwise_loss(const LossSpec& spec, std::span<const double> scores,
                          std::span<const double> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kShapeMismatch, "scores and labels differ in length");
  }
  LossResult out;
  out.d_scores.resize(scores.size());
  const double scale = reduction_scale(spec.reduction, scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double s = scores[i];
    const double y = labels[i];
    switch (spec.type) {
      case LossType::kBCEWithLogits:
        if (!(y >= 0.0 && y <= 1.0)) {
          throw Error(ErrorCode::kLabelOutOfRange, "BCE labels must lie in [0, 1]");
        }
        total += std::max(s, 0.0) - s * y + std::log1p(std::exp(-std::abs(s)));
        out.d_scores[i] = (sigmoid(s) - y) * scale;
        break;
      case LossType::kSoftplus:
        if (y != 1.0 && y != -1.0) {
          throw Error(ErrorCode::kLabelOutOfRange, "Softplus labels must be -1 or +1");
        }
        total += softplus(-y * s);
        out.d_scores[i] = -y * sigmoid(-y * s) * scale;
        break;
      case LossType::kMSE:
        if (!std::isfinite(y)) throw Error(ErrorCode::kLabelOutOfRange, "non-finite MSE label");
        total += (s - y) * (s - y);
        out.d_scores[i] = 2.0 * (s - y) * scale;
        break;
      default:
        throw Error(ErrorCode::kInvalidArgument,
                    std::string(loss_type_name(spec.type)) + " is not a pointwise loss");
    }
  }
  out.value = total * scale;
  return out;
}

LossResult setwise_ce(std::span<const double> scores, std::size_t true_index) {
  if (true_index >= scores.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "true index outside the score row");
  }
  std::vector<double> target(scores.size(), 0.0);
  target[true_index] = 1.0;
  return setwise_ce(scores, target);
}

LossResult setwise_ce(std::span<const double> scores, std::span<const double> targets) {
  if (scores.size() != targets.size() || scores.empty()) {
    throw Error(ErrorCode::kShapeMismatch, "score and target rows differ in length");
  }
  double target_sum = 0.0;
  for (double y : targets) {
    if (!(y >= 0.0)) throw Error(ErrorCode::kLabelOutOfRange, "negative target weight");
    target_sum += y;
  }
  if (!(target_sum > 0.0)) throw Error(ErrorCode::kLabelOutOfRange, "all-zero target row");

  const auto max_it = std::max_element(scores.begin(), scores.end());
  const double m = *max_it;
  const auto arg_max = static_cast<std::size_t>(max_it - scores.begin());
  // Sum of exp(s_i - m) without the maximum's own 1, so log1p keeps the
  // tiny-loss regime accurate.
  double rest = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i != arg_max) rest += std::exp(scores[i] - m);
  }
  const double log_z = std::log1p(rest);  // log sum exp(s - m)

  LossResult out;
  out.d_scores.resize(scores.size());
  double value = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double y = targets[i] / target_sum;
    if (y > 0.0) value += y * (log_z + (m - scores[i]));
    out.d_scores[i] = std::exp(scores[i] - m - log_z) - y;
  }
  out.value = value;
  return out;
}

std::vector<double> nssa_weights(std::span<const double> neg, std::size_t k, double temperature) {
  std::vector<double> w(neg.size());
  if (k == 0) return w;
  for (std::size_t start = 0; start < neg.size(); start += k) {
    double m = temperature * neg[start];
    for (std::size_t i = 1; i < k; ++i) m = std::max(m, temperature * neg[start + i]);
    double z = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      w[start + i] = std::exp(temperature * neg[start + i] - m);
      z += w[start + i];
    }
    for (std::size_t i = 0; i < k; ++i) w[start + i] /= z;
  }
  return w;
}

PairLossResult nssa_loss(const LossSpec& spec, std::span<const double> pos,
                         std::span<const double> neg) {
  const std::size_t k = negatives_per_positive(pos.size(), neg.size());
  PairLossResult out;
  out.d_pos.assign(pos.size(), 0.0);
  out.d_neg.assign(neg.size(), 0.0);
  const std::vector<double> w = nssa_weights(neg, k, spec.temperature);
  const double scale = reduction_scale(spec.reduction, pos.size());
  double total = 0.0;
  for (std::size_t j = 0; j < pos.size(); ++j) {
    const double x = spec.margin + pos[j];
    total += softplus(-x);
    out.d_pos[j] = -sigmoid(-x) * scale;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t idx = j * k + i;
      const double z = neg[idx] + spec.margin;
      total += w[idx] * softplus(z);
      out.d_neg[idx] = w[idx] * sigmoid(z) * scale;
    }
  }
  out.value = total * scale;
  return out;
}

}  // namespace kgemf
