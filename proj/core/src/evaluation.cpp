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

#include "kgemf/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "kgemf/error.hpp"

namespace kgemf {

std::string_view side_name(Side side) {
  switch (side) {
    case Side::kHead: return "head";
    case Side::kTail: return "tail";
    case Side::kBoth: return "both";
  }
  return "both";
}

std::string_view rank_type_name(RankType type) {
  switch (type) {
    case RankType::kOptimistic: return "optimistic";
    case RankType::kPessimistic: return "pessimistic";
    case RankType::kAverage: return "average";
  }
  return "average";
}

double RankRecord::value(RankType type) const {
  switch (type) {
    case RankType::kOptimistic: return static_cast<double>(optimistic);
    case RankType::kPessimistic: return static_cast<double>(pessimistic);
    case RankType::kAverage: return average;
  }
  return average;
}

RankRecord compute_rank(double true_score, std::span<const double> candidate_scores, Side side) {
  if (candidate_scores.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no candidates to rank against");
  }
  std::size_t greater = 0;
  std::size_t equal = 0;
  for (double s : candidate_scores) {
    if (s > true_score) {
      ++greater;
    } else if (s == true_score) {
      ++equal;
    }
  }
  RankRecord r;
  r.optimistic = greater + 1;
  r.pessimistic = greater + std::max<std::size_t>(equal, 1);
  r.average = 0.5 * static_cast<double>(r.optimistic + r.pessimistic);
  r.num_candidates = candidate_scores.size();
  r.side = side;
  return r;
}

double adjusted_mean_rank(std::span<const double> ranks,
                          std::span<const std::size_t> candidate_counts) {
  if (ranks.empty()) throw Error(ErrorCode::kEmptyInput, "no ranks");
  if (ranks.size() != candidate_counts.size()) {
    throw Error(ErrorCode::kShapeMismatch, "ranks and candidate counts differ in length");
  }
  double rank_sum = 0.0;
  double expected_sum = 0.0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (candidate_counts[i] == 0) {
      throw Error(ErrorCode::kInvalidArgument, "candidate count must be >= 1");
    }
    rank_sum += ranks[i];
    expected_sum += 0.5 * (1.0 + static_cast<double>(candidate_counts[i]));
  }
  return rank_sum / expected_sum;
}

RankMetrics aggregate_ranks(std::span<const RankRecord> ranks, RankType type,
                            std::span<const std::size_t> ks) {
  if (ranks.empty()) throw Error(ErrorCode::kEmptyInput, "no ranks to aggregate");
  RankMetrics m;
  std::vector<double> values(ranks.size());
  std::vector<std::size_t> counts(ranks.size());
  double sum = 0.0;
  double reciprocal = 0.0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    values[i] = ranks[i].value(type);
    counts[i] = ranks[i].num_candidates;
    sum += values[i];
    reciprocal += 1.0 / values[i];
  }
  const double n = static_cast<double>(ranks.size());
  m.mean_rank = sum / n;
  m.mean_reciprocal_rank = reciprocal / n;
  m.adjusted_mean_rank = adjusted_mean_rank(values, counts);
  for (std::size_t k : ks) {
    const auto hits = std::count_if(values.begin(), values.end(),
                                    [k](double r) { return r <= static_cast<double>(k); });
    m.hits_at_k.emplace_back(k, static_cast<double>(hits) / n);
  }
  return m;
}

AucMetrics auc_metrics(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kShapeMismatch, "scores and labels differ in length");
  }
  std::size_t num_pos = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw Error(ErrorCode::kLabelOutOfRange, "labels must be 0 or 1");
    num_pos += static_cast<std::size_t>(y);
  }
  const std::size_t num_neg = labels.size() - num_pos;
  if (num_pos == 0 || num_neg == 0) {
    throw Error(ErrorCode::kDegenerateLabels, "need at least one positive and one negative");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Ascending pass: mid-ranks for the Mann-Whitney U statistic.
  double pos_rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t q = i; q < j; ++q) {
      if (labels[order[q]] == 1) pos_rank_sum += mid_rank;
    }
    i = j;
  }
  const double p = static_cast<double>(num_pos);
  const double u = pos_rank_sum - p * (p + 1.0) / 2.0;

  // Descending pass: precision at each distinct threshold.
  double ap = 0.0;
  double tp = 0.0;
  double fp = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = order.size(); i > 0;) {
    std::size_t j = i;
    const double s = scores[order[i - 1]];
    while (j > 0 && scores[order[j - 1]] == s) {
      --j;
      if (labels[order[j]] == 1) {
        tp += 1.0;
      } else {
        fp += 1.0;
      }
    }
    const double recall = tp / p;
    ap += (recall - prev_recall) * (tp / (tp + fp));
    prev_recall = recall;
    i = j;
  }
  return {u / (p * static_cast<double>(num_neg)), ap};
}

const RankMetrics& MetricReport::at(Side side, RankType type) const {
  const auto& slot = metrics[static_cast<std::size_t>(side)][static_cast<std::size_t>(type)];
  if (!slot) {
    throw Error(ErrorCode::kInvalidArgument,
                "side '" + std::string(side_name(side)) + "' was not evaluated");
  }
  return *slot;
}

std::map<std::string, double> MetricReport::flatten() const {
  std::map<std::string, double> out;
  for (Side side : kAllSides) {
    for (RankType type : kAllRankTypes) {
      const auto& slot = metrics[static_cast<std::size_t>(side)][static_cast<std::size_t>(type)];
      if (!slot) continue;
      const std::string prefix =
          std::string(side_name(side)) + "." + std::string(rank_type_name(type)) + ".";
      out[prefix + "mean_rank"] = slot->mean_rank;
      out[prefix + "mean_reciprocal_rank"] = slot->mean_reciprocal_rank;
      out[prefix + "adjusted_mean_rank"] = slot->adjusted_mean_rank;
      for (const auto& [k, hits] : slot->hits_at_k) {
        out[prefix + "hits_at_" + std::to_string(k)] = hits;
      }
    }
  }
  if (auc_roc) out["auc_roc"] = *auc_roc;
  if (auc_pr) out["auc_pr"] = *auc_pr;
  return out;
}

namespace {

struct KnownIndex {
  std::unordered_set<Triple, TripleHash> triples;

  bool contains(EntityId h, RelationId r, EntityId t) const {
    return triples.count(Triple{h, r, t}) > 0;
  }
};

struct PooledAuc {
  std::vector<double> scores;
  std::vector<int> labels;
};

// Ranks the true entity within one score row, skipping filtered candidates.
template <typename IsFiltered>
RankRecord rank_in_row(std::span<const double> row, EntityId truth, Side side,
                       IsFiltered&& is_filtered, PooledAuc* auc) {
  const double true_score = row[truth];
  std::size_t greater = 0;
  std::size_t equal = 0;
  std::size_t candidates = 0;
  for (std::size_t e = 0; e < row.size(); ++e) {
    if (e != truth && is_filtered(static_cast<EntityId>(e))) continue;
    ++candidates;
    if (row[e] > true_score) {
      ++greater;
    } else if (row[e] == true_score) {
      ++equal;
    }
    if (auc != nullptr) {
      auc->scores.push_back(row[e]);
      auc->labels.push_back(e == truth ? 1 : 0);
    }
  }
  RankRecord r;
  r.optimistic = greater + 1;
  r.pessimistic = greater + std::max<std::size_t>(equal, 1);
  r.average = 0.5 * static_cast<double>(r.optimistic + r.pessimistic);
  r.num_candidates = candidates;
  r.side = side;
  return r;
}

}  // namespace

MetricReport evaluate(const ModelParams& params, std::span<const Triple> eval_triples,
                      std::span<const Triple> known_triples, const EvaluationOptions& options) {
  if (eval_triples.empty()) throw Error(ErrorCode::kEmptyInput, "no evaluation triples");
  if (!options.head_side && !options.tail_side) {
    throw Error(ErrorCode::kInvalidArgument, "at least one side must be evaluated");
  }
  for (const Triple& t : eval_triples) check_triple(params, t);

  KnownIndex known;
  if (options.filtered) known.triples.insert(known_triples.begin(), known_triples.end());

  MetricReport report;
  report.ks = options.ks;
  report.num_queries = eval_triples.size();
  PooledAuc pooled;
  PooledAuc* auc = options.compute_auc ? &pooled : nullptr;

  const std::size_t chunk =
      options.batch_size == 0 ? eval_triples.size() : options.batch_size;
  for (std::size_t begin = 0; begin < eval_triples.size(); begin += chunk) {
    const auto batch = eval_triples.subspan(begin, std::min(chunk, eval_triples.size() - begin));
    if (options.tail_side) {
      std::vector<HeadRelation> pairs;
      for (const Triple& t : batch) pairs.emplace_back(t.head, t.relation);
      const ScoreMatrix scores = score_all_tails(params, pairs);
      for (std::size_t i = 0; i < batch.size(); ++i) {
        const Triple& t = batch[i];
        report.tail_ranks.push_back(rank_in_row(
            scores.row(i), t.tail, Side::kTail,
            [&](EntityId e) { return options.filtered && known.contains(t.head, t.relation, e); },
            auc));
      }
    }
    if (options.head_side) {
      std::vector<RelationTail> pairs;
      for (const Triple& t : batch) pairs.emplace_back(t.relation, t.tail);
      const ScoreMatrix scores = score_all_heads(params, pairs);
      for (std::size_t i = 0; i < batch.size(); ++i) {
        const Triple& t = batch[i];
        report.head_ranks.push_back(rank_in_row(
            scores.row(i), t.head, Side::kHead,
            [&](EntityId e) { return options.filtered && known.contains(e, t.relation, t.tail); },
            auc));
      }
    }
  }

  std::vector<RankRecord> both;
  both.reserve(report.head_ranks.size() + report.tail_ranks.size());
  both.insert(both.end(), report.head_ranks.begin(), report.head_ranks.end());
  both.insert(both.end(), report.tail_ranks.begin(), report.tail_ranks.end());
  for (RankType type : kAllRankTypes) {
    const auto ti = static_cast<std::size_t>(type);
    if (options.head_side) {
      report.metrics[static_cast<std::size_t>(Side::kHead)][ti] =
          aggregate_ranks(report.head_ranks, type, options.ks);
    }
    if (options.tail_side) {
      report.metrics[static_cast<std::size_t>(Side::kTail)][ti] =
          aggregate_ranks(report.tail_ranks, type, options.ks);
    }
    report.metrics[static_cast<std::size_t>(Side::kBoth)][ti] =
        aggregate_ranks(both, type, options.ks);
  }
  if (auc != nullptr) {
    const bool has_pos = std::find(pooled.labels.begin(), pooled.labels.end(), 1) != pooled.labels.end();
    const bool has_neg = std::find(pooled.labels.begin(), pooled.labels.end(), 0) != pooled.labels.end();
    if (has_pos && has_neg) {
      const AucMetrics m = auc_metrics(pooled.scores, pooled.labels);
      report.auc_roc = m.roc;
      report.auc_pr = m.pr;
    }
  }
  return report;
}

}  // namespace kgemf
