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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "kgemf/evaluation.hpp"
#include "oracles.hpp"

namespace kgemf {
namespace {

std::vector<Triple> random_queries(std::size_t n, std::size_t entities, std::size_t relations,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<EntityId> e(0, static_cast<EntityId>(entities - 1));
  std::uniform_int_distribution<RelationId> r(0, static_cast<RelationId>(relations - 1));
  std::vector<Triple> out(n);
  for (Triple& t : out) t = {e(rng), r(rng), e(rng)};
  return out;
}

EvaluationOptions no_auc(bool filtered = true) {
  EvaluationOptions o;
  o.filtered = filtered;
  o.compute_auc = false;
  return o;
}

bool same_rank(const RankRecord& a, const RankRecord& b) {
  return a.optimistic == b.optimistic && a.pessimistic == b.pessimistic &&
         a.average == b.average && a.num_candidates == b.num_candidates;
}

// atan of DistMult: a strictly monotone transform of the scores.
class AtanDistMult final : public Interaction {
 public:
  std::string_view name() const override { return "AtanDistMultForEvalTest"; }
  std::vector<TableSpec> table_specs(std::size_t dim) const override {
    return find_interaction("DistMult").table_specs(dim);
  }
  double score(const ModelParams& p, const Triple& t) const override {
    return std::atan(find_interaction("DistMult").score(p, t));
  }
  void accumulate_gradient(const ModelParams&, const Triple&, double, Gradients&) const override {}
};

TEST(ComputeRank, Examples) {
  const std::vector<double> a{0.9, 0.5, 0.1};
  const RankRecord r1 = compute_rank(0.9, a);
  EXPECT_EQ(r1.optimistic, 1u);
  EXPECT_EQ(r1.pessimistic, 1u);
  EXPECT_EQ(r1.average, 1.0);

  const std::vector<double> b(5, 0.3);
  const RankRecord r2 = compute_rank(0.3, b);
  EXPECT_EQ(r2.optimistic, 1u);
  EXPECT_EQ(r2.pessimistic, 5u);
  EXPECT_EQ(r2.average, 3.0);

  const std::vector<double> c{0.9, 0.9, 0.5};
  const RankRecord r3 = compute_rank(0.9, c);
  EXPECT_EQ(r3.optimistic, 1u);
  EXPECT_EQ(r3.pessimistic, 2u);
  EXPECT_EQ(r3.average, 1.5);
}

TEST(ComputeRank, MatchesSortingOracleOnTieHeavyCases) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    std::uniform_int_distribution<int> level(0, 4);
    std::vector<double> scores(n);
    for (double& s : scores) s = level(rng) * 0.25;
    const double truth = scores[rng() % n];
    const RankRecord got = compute_rank(truth, scores);
    EXPECT_TRUE(same_rank(got, testing::sort_rank(truth, scores)));
    EXPECT_LE(static_cast<double>(got.optimistic), got.average);
    EXPECT_LE(got.average, static_cast<double>(got.pessimistic));
    const bool tied = std::count(scores.begin(), scores.end(), truth) > 1;
    EXPECT_EQ(got.optimistic == got.pessimistic, !tied);
  }
}

TEST(AdjustedMeanRank, Examples) {
  const std::vector<double> one{1.0};
  const std::vector<std::size_t> c1{1};
  EXPECT_EQ(adjusted_mean_rank(one, c1), 1.0);
  const std::vector<double> mid{3.0, 5.5, 1.0};
  const std::vector<std::size_t> counts{5, 10, 1};
  EXPECT_DOUBLE_EQ(adjusted_mean_rank(mid, counts), 1.0);
  EXPECT_KGEMF_ERROR(adjusted_mean_rank({}, {}), ErrorCode::kEmptyInput);
}

TEST(AdjustedMeanRank, RandomModelIsNearChance) {
  const ModelParams p = testing::random_model("DistMult", 60, 3, 8, 5);
  const auto queries = random_queries(1000, 60, 3, 6);
  const MetricReport r = evaluate(p, queries, queries, no_auc(false));
  const double amr = r.at(Side::kBoth, RankType::kAverage).adjusted_mean_rank;
  EXPECT_GE(amr, 0.9);
  EXPECT_LE(amr, 1.1);
}

TEST(Auc, Separation) {
  const std::vector<double> s{0.9, 0.8, 0.2, 0.1};
  const std::vector<int> y{1, 1, 0, 0};
  const std::vector<int> flipped{0, 0, 1, 1};
  const AucMetrics good = auc_metrics(s, y);
  EXPECT_EQ(good.roc, 1.0);
  EXPECT_EQ(good.pr, 1.0);
  EXPECT_EQ(auc_metrics(s, flipped).roc, 0.0);
}

TEST(Auc, HandComputedValues) {
  const std::vector<double> s{0.9, 0.8, 0.7};
  const std::vector<int> y{1, 0, 1};
  const AucMetrics m = auc_metrics(s, y);
  EXPECT_DOUBLE_EQ(m.roc, 0.5);
  EXPECT_DOUBLE_EQ(m.pr, (1.0 + 2.0 / 3.0) / 2.0);

  const std::vector<double> tied{0.5, 0.5, 0.5, 0.5};
  const std::vector<int> ty{1, 0, 0, 0};
  const AucMetrics t = auc_metrics(tied, ty);
  EXPECT_DOUBLE_EQ(t.roc, 0.5);
  EXPECT_DOUBLE_EQ(t.pr, 0.25);
}

TEST(Auc, RandomScoresGiveHalf) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s(10000);
  std::vector<int> y(10000);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = u(rng);
    y[i] = u(rng) < 0.5;
  }
  const AucMetrics m = auc_metrics(s, y);
  EXPECT_NEAR(m.roc, 0.5, 0.02);
  EXPECT_GE(m.pr, 0.0);
  EXPECT_LE(m.pr, 1.0);
}

TEST(Auc, DegenerateLabels) {
  const std::vector<double> s{0.1, 0.2};
  const std::vector<int> y{1, 1};
  EXPECT_KGEMF_ERROR(auc_metrics(s, y), ErrorCode::kDegenerateLabels);
}

TEST(Evaluate, OracleModelRanksFirst) {
  // One-dimensional TransE with entity i at position i and a unit shift:
  // (i, r, i + 1) is the unique best triple for both query sides.
  ModelParams p(ModelOptions{"TransE", 10, 1, 1});
  for (std::size_t e = 0; e < 10; ++e) p.table(0).values[e] = static_cast<double>(e);
  p.table(1).values[0] = 1.0;
  std::vector<Triple> eval;
  for (EntityId e = 0; e + 1 < 10; ++e) eval.push_back({e, 0, e + 1});
  const MetricReport r = evaluate(p, eval, eval, no_auc(false));
  for (Side side : kAllSides) {
    for (RankType type : kAllRankTypes) {
      const RankMetrics& m = r.at(side, type);
      EXPECT_EQ(m.mean_rank, 1.0);
      EXPECT_EQ(m.mean_reciprocal_rank, 1.0);
      EXPECT_EQ(m.hits_at_k.front().second, 1.0);
    }
  }
}

TEST(Evaluate, ConstantModelAverageRankIsMidpoint) {
  const ModelParams p(ModelOptions{"DistMult", 9, 2, 3});  // all-zero tables
  const auto queries = random_queries(20, 9, 2, 1);
  const MetricReport r = evaluate(p, queries, queries, no_auc(false));
  for (const auto& rec : r.tail_ranks) EXPECT_EQ(rec.average, 5.0);
  EXPECT_EQ(r.at(Side::kBoth, RankType::kAverage).mean_rank, 5.0);
  EXPECT_EQ(r.at(Side::kBoth, RankType::kOptimistic).mean_rank, 1.0);
  EXPECT_EQ(r.at(Side::kBoth, RankType::kPessimistic).mean_rank, 9.0);
  EXPECT_EQ(r.at(Side::kBoth, RankType::kAverage).adjusted_mean_rank, 1.0);
}

TEST(Evaluate, MatchesBruteForceOracle) {
  const std::vector<std::size_t> ks{1, 3, 10};
  for (const auto& model : testing::all_models()) {
    for (bool inverse : {false, true}) {
      const ModelParams p = testing::random_model(model, 25, 3, 4, 17, inverse);
      const auto queries = random_queries(200, 25, 3, 18);
      auto known = random_queries(300, 25, 3, 19);
      known.insert(known.end(), queries.begin(), queries.end());
      for (bool filtered : {true, false}) {
        EvaluationOptions o = no_auc(filtered);
        o.ks = ks;
        o.batch_size = 37;
        const MetricReport got = evaluate(p, queries, known, o);
        const auto want = testing::brute_force_evaluate(p, queries, known, ks, filtered);
        ASSERT_EQ(got.head_ranks.size(), want.head_ranks.size());
        for (std::size_t i = 0; i < queries.size(); ++i) {
          EXPECT_TRUE(same_rank(got.head_ranks[i], want.head_ranks[i])) << model << " " << i;
          EXPECT_TRUE(same_rank(got.tail_ranks[i], want.tail_ranks[i])) << model << " " << i;
        }
        const auto flat = got.flatten();
        ASSERT_EQ(flat.size(), want.metrics.size());
        for (const auto& [key, value] : want.metrics) {
          ASSERT_TRUE(flat.count(key)) << key;
          EXPECT_NEAR(flat.at(key), value, 1e-12) << model << " " << key;
        }
      }
    }
  }
}

TEST(Evaluate, FilteredNeverWorseThanUnfiltered) {
  const ModelParams p = testing::random_model("ComplEx", 20, 2, 4, 3);
  const auto queries = random_queries(100, 20, 2, 4);
  auto known = random_queries(200, 20, 2, 5);
  known.insert(known.end(), queries.begin(), queries.end());
  const MetricReport f = evaluate(p, queries, known, no_auc(true));
  const MetricReport u = evaluate(p, queries, known, no_auc(false));
  for (std::size_t i = 0; i < queries.size(); ++i) {
    EXPECT_LE(f.head_ranks[i].pessimistic, u.head_ranks[i].pessimistic);
    EXPECT_LE(f.tail_ranks[i].pessimistic, u.tail_ranks[i].pessimistic);
    EXPECT_LE(f.tail_ranks[i].optimistic, u.tail_ranks[i].optimistic);
  }
}

TEST(Evaluate, InvariantUnderMonotoneTransform) {
  static const bool registered = [] {
    register_interaction(std::make_unique<AtanDistMult>());
    return true;
  }();
  ASSERT_TRUE(registered);
  const ModelParams p = testing::random_model("DistMult", 20, 2, 4, 8);
  ModelParams q(ModelOptions{"AtanDistMultForEvalTest", 20, 2, 4});
  q.tables() = p.tables();
  const auto queries = random_queries(100, 20, 2, 9);
  const auto a = evaluate(p, queries, queries, no_auc()).flatten();
  const auto b = evaluate(q, queries, queries, no_auc()).flatten();
  EXPECT_EQ(a, b);
}

TEST(Evaluate, InverseHeadSideEqualsInvertedTailSide) {
  const ModelParams p = testing::random_model("RotatE", 15, 3, 4, 2, true);
  const auto queries = random_queries(80, 15, 3, 3);
  std::vector<Triple> inverted;
  for (const Triple& t : queries) inverted.push_back({t.tail, t.relation + 3, t.head});
  EvaluationOptions head = no_auc();
  head.tail_side = false;
  EvaluationOptions tail = no_auc();
  tail.head_side = false;
  const MetricReport h = evaluate(p, queries, queries, head);
  const MetricReport t = evaluate(p, inverted, inverted, tail);
  ASSERT_EQ(h.head_ranks.size(), t.tail_ranks.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    EXPECT_TRUE(same_rank(h.head_ranks[i], t.tail_ranks[i]));
  }
  EXPECT_TRUE(h.tail_ranks.empty());
}

TEST(Evaluate, MetricReportInvariants) {
  const ModelParams p = testing::random_model("TransE", 30, 3, 6, 1);
  const auto queries = random_queries(150, 30, 3, 2);
  EvaluationOptions o;
  o.ks = {1, 2, 5, 10, 30};
  const MetricReport r = evaluate(p, queries, queries, o);
  for (Side side : kAllSides) {
    for (RankType type : kAllRankTypes) {
      const RankMetrics& m = r.at(side, type);
      EXPECT_GT(m.mean_reciprocal_rank, 0.0);
      EXPECT_LE(m.mean_reciprocal_rank, 1.0);
      EXPECT_GT(m.adjusted_mean_rank, 0.0);
      double prev = 0.0;
      for (const auto& [k, h] : m.hits_at_k) {
        EXPECT_GE(h, prev);
        EXPECT_LE(h, 1.0);
        prev = h;
      }
    }
  }
  ASSERT_TRUE(r.auc_roc.has_value());
  EXPECT_GE(*r.auc_roc, 0.0);
  EXPECT_LE(*r.auc_roc, 1.0);
  const auto flat = r.flatten();
  EXPECT_TRUE(flat.count("both.average.adjusted_mean_rank"));
  EXPECT_TRUE(flat.count("tail.pessimistic.hits_at_30"));
  EXPECT_TRUE(flat.count("auc_pr"));
}

TEST(Evaluate, RejectsOutOfRangeIds) {
  const ModelParams p = testing::random_model("DistMult", 5, 1, 2, 1);
  const std::vector<Triple> bad{{0, 0, 7}};
  EXPECT_KGEMF_ERROR(evaluate(p, bad, bad, no_auc()), ErrorCode::kIdOutOfRange);
}

}  // namespace
}  // namespace kgemf
