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

#ifndef KGEMF_EVALUATION_HPP_
#define KGEMF_EVALUATION_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgemf/graph.hpp"
#include "kgemf/model.hpp"

namespace kgemf {

enum class Side { kHead, kTail, kBoth };
enum class RankType { kOptimistic, kPessimistic, kAverage };

inline constexpr std::array<Side, 3> kAllSides{Side::kHead, Side::kTail, Side::kBoth};
inline constexpr std::array<RankType, 3> kAllRankTypes{RankType::kOptimistic,
                                                       RankType::kPessimistic,
                                                       RankType::kAverage};

std::string_view side_name(Side side);
std::string_view rank_type_name(RankType type);

// Rank of the true entity among `num_candidates` candidates.
//   optimistic  = 1 + #{candidates scoring strictly higher}
//   pessimistic = optimistic + #{other candidates tied with the true score}
//   average     = (optimistic + pessimistic) / 2
struct RankRecord {
  std::size_t optimistic = 1;
  std::size_t pessimistic = 1;
  double average = 1.0;
  std::size_t num_candidates = 1;
  Side side = Side::kTail;

  double value(RankType type) const;
  friend bool operator==(const RankRecord&, const RankRecord&) = default;
};

// `candidate_scores` includes the true entity's score exactly once.
RankRecord compute_rank(double true_score, std::span<const double> candidate_scores,
                        Side side = Side::kTail);

struct RankMetrics {
  double mean_rank = 0.0;
  double mean_reciprocal_rank = 0.0;
  double adjusted_mean_rank = 0.0;
  std::vector<std::pair<std::size_t, double>> hits_at_k;  // (k, fraction with rank <= k)
};

// Aggregates ranks of one type. Throws kEmptyInput for no ranks.
RankMetrics aggregate_ranks(std::span<const RankRecord> ranks, RankType type,
                            std::span<const std::size_t> ks);

// AMR = sum_i rank_i / sum_i (1 + |C_i|) / 2, the mean rank divided by its
// expectation under uniformly random scoring. 1.0 is chance level.
double adjusted_mean_rank(std::span<const double> ranks,
                          std::span<const std::size_t> candidate_counts);

struct AucMetrics {
  double roc = 0.0;
  double pr = 0.0;
};

// AUC-ROC via the Mann-Whitney statistic with mid-ranks for ties; AUC-PR as
// average precision (step integration of precision over recall, ties
// grouped into one threshold). Labels are 0/1; throws kDegenerateLabels
// unless both classes occur.
AucMetrics auc_metrics(std::span<const double> scores, std::span<const int> labels);

struct MetricReport {
  std::vector<std::size_t> ks;
  std::size_t num_queries = 0;  // evaluation triples
  // Indexed [side][rank type]; empty for a side that was not evaluated.
  std::array<std::array<std::optional<RankMetrics>, 3>, 3> metrics;
  std::optional<double> auc_roc;
  std::optional<double> auc_pr;
  // Per-triple records, in evaluation order.
  std::vector<RankRecord> head_ranks;
  std::vector<RankRecord> tail_ranks;

  const RankMetrics& at(Side side, RankType type) const;

  // Flat `{side}.{rank_type}.{metric}` map plus `auc_roc` / `auc_pr`.
  std::map<std::string, double> flatten() const;
};

struct EvaluationOptions {
  std::vector<std::size_t> ks{1, 3, 5, 10};
  bool filtered = true;
  bool head_side = true;
  bool tail_side = true;
  bool compute_auc = true;
  // Queries scored per score_all_* call; 0 scores everything at once.
  std::size_t batch_size = 0;
};

// Link-prediction evaluation. Tail ranks come from score_all_tails and head
// ranks from score_all_heads. In the filtered protocol a candidate is
// dropped when it forms another triple of `known_triples` (the true entity
// itself is always kept). AUC pools one positive per query side with the
// remaining candidates as negatives.
MetricReport evaluate(const ModelParams& params, std::span<const Triple> eval_triples,
                      std::span<const Triple> known_triples, const EvaluationOptions& options);

}  // namespace kgemf

#endif  // KGEMF_EVALUATION_HPP_
