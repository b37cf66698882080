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

#include "kgemf/model.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "kgemf/error.hpp"

namespace kgemf {

std::string_view init_scheme_name(InitScheme scheme) {
  return scheme == InitScheme::kUniformXavier ? "uniform_xavier" : "normal_xavier";
}

InitScheme parse_init_scheme(std::string_view name) {
  if (name == "uniform_xavier") return InitScheme::kUniformXavier;
  if (name == "normal_xavier") return InitScheme::kNormalXavier;
  throw Error(ErrorCode::kInvalidArgument, "unknown init scheme '" + std::string(name) + "'");
}

std::span<double> Gradients::row(RowKey key, std::size_t width) {
  auto [it, inserted] = rows_.try_emplace(key);
  if (inserted) it->second.assign(width, 0.0);
  return it->second;
}

const std::vector<double>* Gradients::find(RowKey key) const {
  auto it = rows_.find(key);
  return it == rows_.end() ? nullptr : &it->second;
}

void Gradients::add(const Gradients& other) {
  for (const auto& [key, values] : other.rows_) {
    auto dst = row(key, values.size());
    for (std::size_t i = 0; i < values.size(); ++i) dst[i] += values[i];
  }
}

void Gradients::scale(double factor) {
  for (auto& [key, values] : rows_) {
    for (double& v : values) v *= factor;
  }
}

std::vector<RowKey> Gradients::keys() const {
  std::vector<RowKey> out;
  out.reserve(rows_.size());
  for (const auto& entry : rows_) out.push_back(entry.first);
  return out;
}

void Interaction::initialize(ModelParams& params, InitScheme scheme,
                             std::mt19937_64& rng) const {
  for (Table& table : params.tables()) {
    const double fan = static_cast<double>(table.rows + table.width);
    if (scheme == InitScheme::kUniformXavier) {
      const double bound = std::sqrt(6.0 / fan);
      std::uniform_real_distribution<double> dist(-bound, bound);
      for (double& v : table.values) v = dist(rng);
    } else {
      std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / fan));
      for (double& v : table.values) v = dist(rng);
    }
  }
}

void Interaction::project(ModelParams&, std::span<const RowKey>) const {}

namespace {

constexpr double kPi = std::numbers::pi;

// sum_i a_i b_i c_i. The product a_i * c_i is formed first so that swapping
// a and c gives bit-identical results.
double dot3(std::span<const double> a, std::span<const double> b, std::span<const double> c) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] * c[i]) * b[i];
  return s;
}

// Rescales the listed rows of table `index` to unit L2 norm.
void normalize_rows(ModelParams& p, std::size_t index, std::span<const RowKey> rows) {
  Table& table = p.table(index);
  for (const RowKey& key : rows) {
    if (key.table != index) continue;
    auto w = table.row(key.row);
    double n = 0.0;
    for (double v : w) n += v * v;
    n = std::sqrt(n);
    if (n == 0.0) {
      w[0] = 1.0;
      continue;
    }
    for (double& v : w) v /= n;
  }
}

std::vector<RowKey> all_rows(const ModelParams& p, std::size_t index) {
  std::vector<RowKey> rows;
  for (std::size_t r = 0; r < p.table(index).rows; ++r) {
    rows.push_back({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(r)});
  }
  return rows;
}

// f = -||h + r - t||_p
class TransE final : public Interaction {
 public:
  std::string_view name() const override { return "TransE"; }

  std::vector<TableSpec> table_specs(std::size_t dim) const override {
    return {{"entity", TableRole::kEntity, dim}, {"relation", TableRole::kRelation, dim}};
  }

  double score(const ModelParams& p, const Triple& t) const override {
    auto h = p.table(0).row(t.head);
    auto r = p.table(1).row(t.relation);
    auto e = p.table(0).row(t.tail);
    double s = 0.0;
    if (p.p_norm() == 1) {
      for (std::size_t i = 0; i < h.size(); ++i) s += std::abs(h[i] + r[i] - e[i]);
      return -s;
    }
    for (std::size_t i = 0; i < h.size(); ++i) {
      const double v = h[i] + r[i] - e[i];
      s += v * v;
    }
    return -std::sqrt(s);
  }

  void accumulate_gradient(const ModelParams& p, const Triple& t, double upstream,
                           Gradients& out) const override {
    const std::size_t d = p.dim();
    auto h = p.table(0).row(t.head);
    auto r = p.table(1).row(t.relation);
    auto e = p.table(0).row(t.tail);
    std::vector<double> g(d);
    if (p.p_norm() == 1) {
      for (std::size_t i = 0; i < d; ++i) {
        const double v = h[i] + r[i] - e[i];
        g[i] = v > 0 ? -upstream : (v < 0 ? upstream : 0.0);
      }
    } else {
      double norm = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double v = h[i] + r[i] - e[i];
        g[i] = v;
        norm += v * v;
      }
      norm = std::sqrt(norm);
      const double f = norm > 0.0 ? -upstream / norm : 0.0;
      for (double& x : g) x *= f;
    }
    auto gh = out.row({0, t.head}, d);
    for (std::size_t i = 0; i < d; ++i) gh[i] += g[i];
    auto gr = out.row({1, t.relation}, d);
    for (std::size_t i = 0; i < d; ++i) gr[i] += g[i];
    auto gt = out.row({0, t.tail}, d);
    for (std::size_t i = 0; i < d; ++i) gt[i] -= g[i];
  }

  // Entity rows are kept at unit L2 norm.
  void initialize(ModelParams& p, InitScheme scheme, std::mt19937_64& rng) const override {
    Interaction::initialize(p, scheme, rng);
    normalize_rows(p, 0, all_rows(p, 0));
  }

  void project(ModelParams& p, std::span<const RowKey> rows) const override {
    normalize_rows(p, 0, rows);
  }
};

// f = sum_i h_i r_i t_i
class DistMult final : public Interaction {
 public:
  std::string_view name() const override { return "DistMult"; }

  std::vector<TableSpec> table_specs(std::size_t dim) const override {
    return {{"entity", TableRole::kEntity, dim}, {"relation", TableRole::kRelation, dim}};
  }

  double score(const ModelParams& p, const Triple& t) const override {
    return dot3(p.table(0).row(t.head), p.table(1).row(t.relation), p.table(0).row(t.tail));
  }

  void accumulate_gradient(const ModelParams& p, const Triple& t, double upstream,
                           Gradients& out) const override {
    const std::size_t d = p.dim();
    auto h = p.table(0).row(t.head);
    auto r = p.table(1).row(t.relation);
    auto e = p.table(0).row(t.tail);
    {
      auto g = out.row({0, t.head}, d);
      for (std::size_t i = 0; i < d; ++i) g[i] += upstream * r[i] * e[i];
    }
    {
      auto g = out.row({1, t.relation}, d);
      for (std::size_t i = 0; i < d; ++i) g[i] += upstream * h[i] * e[i];
    }
    {
      auto g = out.row({0, t.tail}, d);
      for (std::size_t i = 0; i < d; ++i) g[i] += upstream * h[i] * r[i];
    }
  }
};

// f = Re(sum_i h_i r_i conj(t_i)); complex entries stored as interleaved
// (re, im) pairs.
class ComplEx final : public Interaction {
 public:
  std::string_view name() const override { return "ComplEx"; }

  std::vector<TableSpec> table_specs(std::size_t dim) const override {
    return {{"entity", TableRole::kEntity, 2 * dim},
            {"relation", TableRole::kRelation, 2 * dim}};
  }

  double score(const ModelParams& p, const Triple& t) const override {
    auto h = p.table(0).row(t.head);
    auto r = p.table(1).row(t.relation);
    auto e = p.table(0).row(t.tail);
    double s = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) {
      const double a = h[2 * i], b = h[2 * i + 1];
      const double c = r[2 * i], d = r[2 * i + 1];
      const double x = e[2 * i], y = e[2 * i + 1];
      s += (a * c - b * d) * x + (a * d + b * c) * y;
    }
    return s;
  }

  void accumulate_gradient(const ModelParams& p, const Triple& t, double upstream,
                           Gradients& out) const override {
    const std::size_t w = 2 * p.dim();
    const auto h = p.table(0).row(t.head);
    const auto r = p.table(1).row(t.relation);
    const auto e = p.table(0).row(t.tail);
    auto gh = out.row({0, t.head}, w);
    for (std::size_t i = 0; i < p.dim(); ++i) {
      const double c = r[2 * i], d = r[2 * i + 1];
      const double x = e[2 * i], y = e[2 * i + 1];
      gh[2 * i] += upstream * (c * x + d * y);
      gh[2 * i + 1] += upstream * (c * y - d * x);
    }
    auto gr = out.row({1, t.relation}, w);
    for (std::size_t i = 0; i < p.dim(); ++i) {
      const double a = h[2 * i], b = h[2 * i + 1];
      const double x = e[2 * i], y = e[2 * i + 1];
      gr[2 * i] += upstream * (a * x + b * y);
      gr[2 * i + 1] += upstream * (a * y - b * x);
    }
    auto gt = out.row({0, t.tail}, w);
    for (std::size_t i = 0; i < p.dim(); ++i) {
      const double a = h[2 * i], b = h[2 * i + 1];
      const double c = r[2 * i], d = r[2 * i + 1];
      gt[2 * i] += upstream * (a * c - b * d);
      gt[2 * i + 1] += upstream * (a * d + b * c);
    }
  }
};

// f = -||h o exp(i theta_r) - t||_2; relations are stored as phases.
class RotatE final : public Interaction {
 public:
  std::string_view name() const override { return "RotatE"; }

  std::vector<TableSpec> table_specs(std::size_t dim) const override {
    return {{"entity", TableRole::kEntity, 2 * dim}, {"phase", TableRole::kRelation, dim}};
  }

  double score(const ModelParams& p, const Triple& t) const override {
    auto h = p.table(0).row(t.head);
    auto theta = p.table(1).row(t.relation);
    auto e = p.table(0).row(t.tail);
    double s = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) {
      const double c = std::cos(theta[i]), sn = std::sin(theta[i]);
      const double re = h[2 * i] * c - h[2 * i + 1] * sn - e[2 * i];
      const double im = h[2 * i] * sn + h[2 * i + 1] * c - e[2 * i + 1];
      s += re * re + im * im;
    }
    return -std::sqrt(s);
  }

  void accumulate_gradient(const ModelParams& p, const Triple& t, double upstream,
                           Gradients& out) const override {
    const std::size_t d = p.dim();
    auto h = p.table(0).row(t.head);
    auto theta = p.table(1).row(t.relation);
    auto e = p.table(0).row(t.tail);
    std::vector<double> u(2 * d), cs(d), sn(d);
    double norm = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      cs[i] = std::cos(theta[i]);
      sn[i] = std::sin(theta[i]);
      u[2 * i] = h[2 * i] * cs[i] - h[2 * i + 1] * sn[i] - e[2 * i];
      u[2 * i + 1] = h[2 * i] * sn[i] + h[2 * i + 1] * cs[i] - e[2 * i + 1];
      norm += u[2 * i] * u[2 * i] + u[2 * i + 1] * u[2 * i + 1];
    }
    norm = std::sqrt(norm);
    const double f = norm > 0.0 ? -upstream / norm : 0.0;
    // g = d f / d u
    for (double& x : u) x *= f;
    std::vector<double> gh(2 * d), gtheta(d);
    for (std::size_t i = 0; i < d; ++i) {
      const double a = h[2 * i], b = h[2 * i + 1];
      const double g_re = u[2 * i], g_im = u[2 * i + 1];
      gh[2 * i] = g_re * cs[i] + g_im * sn[i];
      gh[2 * i + 1] = -g_re * sn[i] + g_im * cs[i];
      gtheta[i] = g_re * (-a * sn[i] - b * cs[i]) + g_im * (a * cs[i] - b * sn[i]);
    }
    auto oh = out.row({0, t.head}, 2 * d);
    for (std::size_t i = 0; i < 2 * d; ++i) oh[i] += gh[i];
    auto ot = out.row({0, t.tail}, 2 * d);
    for (std::size_t i = 0; i < 2 * d; ++i) ot[i] -= u[i];
    auto orel = out.row({1, t.relation}, d);
    for (std::size_t i = 0; i < d; ++i) orel[i] += gtheta[i];
  }

  void initialize(ModelParams& p, InitScheme scheme, std::mt19937_64& rng) const override {
    Interaction::initialize(p, scheme, rng);
    std::uniform_real_distribution<double> phase(-kPi, kPi);
    for (double& v : p.table(1).values) v = phase(rng);
  }

  void project(ModelParams& p, std::span<const RowKey> rows) const override {
    Table& phases = p.table(1);
    for (const RowKey& key : rows) {
      if (key.table != 1) continue;
      for (double& v : phases.row(key.row)) {
        v -= 2.0 * kPi * std::floor((v + kPi) / (2.0 * kPi));
        if (v >= kPi) v -= 2.0 * kPi;
      }
    }
  }
};

// f = 1/2 (<H_h, R_r, T_t> + <H_t, R'_r, T_h>)
class SimplE final : public Interaction {
 public:
  std::string_view name() const override { return "SimplE"; }

  std::vector<TableSpec> table_specs(std::size_t dim) const override {
    return {{"entity_head", TableRole::kEntity, dim},
            {"entity_tail", TableRole::kEntity, dim},
            {"relation", TableRole::kRelation, dim},
            {"relation_inverse", TableRole::kRelation, dim}};
  }

  double score(const ModelParams& p, const Triple& t) const override {
    const double forward = dot3(p.table(0).row(t.head), p.table(2).row(t.relation),
                                p.table(1).row(t.tail));
    const double backward = dot3(p.table(0).row(t.tail), p.table(3).row(t.relation),
                                 p.table(1).row(t.head));
    return 0.5 * (forward + backward);
  }

  void accumulate_gradient(const ModelParams& p, const Triple& t, double upstream,
                           Gradients& out) const override {
    const std::size_t d = p.dim();
    const double u = 0.5 * upstream;
    auto hh = p.table(0).row(t.head);
    auto th = p.table(1).row(t.head);
    auto ht = p.table(0).row(t.tail);
    auto tt = p.table(1).row(t.tail);
    auto r = p.table(2).row(t.relation);
    auto ri = p.table(3).row(t.relation);
    auto add = [&](RowKey key, auto&& value) {
      auto g = out.row(key, d);
      for (std::size_t i = 0; i < d; ++i) g[i] += u * value(i);
    };
    add({0, t.head}, [&](std::size_t i) { return r[i] * tt[i]; });
    add({2, t.relation}, [&](std::size_t i) { return hh[i] * tt[i]; });
    add({1, t.tail}, [&](std::size_t i) { return hh[i] * r[i]; });
    add({0, t.tail}, [&](std::size_t i) { return ri[i] * th[i]; });
    add({3, t.relation}, [&](std::size_t i) { return ht[i] * th[i]; });
    add({1, t.head}, [&](std::size_t i) { return ht[i] * ri[i]; });
  }
};

// f = -||(h - (w.h) w) + d - (t - (w.t) w)||_2^2 with unit normal w.
class TransH final : public Interaction {
 public:
  std::string_view name() const override { return "TransH"; }

  std::vector<TableSpec> table_specs(std::size_t dim) const override {
    return {{"entity", TableRole::kEntity, dim},
            {"translation", TableRole::kRelation, dim},
            {"normal", TableRole::kRelation, dim}};
  }

  double score(const ModelParams& p, const Triple& t) const override {
    auto h = p.table(0).row(t.head);
    auto e = p.table(0).row(t.tail);
    auto dr = p.table(1).row(t.relation);
    auto w = p.table(2).row(t.relation);
    const std::size_t d = p.dim();
    double wh = 0.0, we = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      wh += w[i] * h[i];
      we += w[i] * e[i];
    }
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double v = (h[i] - wh * w[i]) + dr[i] - (e[i] - we * w[i]);
      s += v * v;
    }
    return -s;
  }

  void accumulate_gradient(const ModelParams& p, const Triple& t, double upstream,
                           Gradients& out) const override {
    const std::size_t d = p.dim();
    auto h = p.table(0).row(t.head);
    auto e = p.table(0).row(t.tail);
    auto dr = p.table(1).row(t.relation);
    auto w = p.table(2).row(t.relation);
    std::vector<double> delta(d), g(d);
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      delta[i] = h[i] - e[i];
      s += w[i] * delta[i];
    }
    double gw_dot = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double v = delta[i] - s * w[i] + dr[i];
      g[i] = -2.0 * upstream * v;
      gw_dot += g[i] * w[i];
    }
    auto gh = out.row({0, t.head}, d);
    for (std::size_t i = 0; i < d; ++i) gh[i] += g[i] - gw_dot * w[i];
    auto gt = out.row({0, t.tail}, d);
    for (std::size_t i = 0; i < d; ++i) gt[i] -= g[i] - gw_dot * w[i];
    auto gd = out.row({1, t.relation}, d);
    for (std::size_t i = 0; i < d; ++i) gd[i] += g[i];
    auto gn = out.row({2, t.relation}, d);
    for (std::size_t i = 0; i < d; ++i) gn[i] += -gw_dot * delta[i] - s * g[i];
  }

  void initialize(ModelParams& p, InitScheme scheme, std::mt19937_64& rng) const override {
    Interaction::initialize(p, scheme, rng);
    normalize_rows(p, 2, all_rows(p, 2));
  }

  void project(ModelParams& p, std::span<const RowKey> rows) const override {
    normalize_rows(p, 2, rows);
  }
};

struct Registry {
  std::mutex mutex;
  std::vector<std::unique_ptr<Interaction>> entries;

  Registry() {
    entries.push_back(std::make_unique<TransE>());
    entries.push_back(std::make_unique<DistMult>());
    entries.push_back(std::make_unique<ComplEx>());
    entries.push_back(std::make_unique<RotatE>());
    entries.push_back(std::make_unique<SimplE>());
    entries.push_back(std::make_unique<TransH>());
  }
};

Registry& registry() {
  static Registry instance;
  return instance;
}

}  // namespace

const Interaction& find_interaction(std::string_view name) {
  Registry& reg = registry();
  std::lock_guard lock(reg.mutex);
  for (const auto& entry : reg.entries) {
    if (entry->name() == name) return *entry;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown interaction model '" + std::string(name) + "'");
}

void register_interaction(std::unique_ptr<Interaction> interaction) {
  Registry& reg = registry();
  std::lock_guard lock(reg.mutex);
  for (const auto& entry : reg.entries) {
    if (entry->name() == interaction->name()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "interaction '" + std::string(interaction->name()) + "' already registered");
    }
  }
  reg.entries.push_back(std::move(interaction));
}

std::vector<std::string> interaction_names() {
  Registry& reg = registry();
  std::lock_guard lock(reg.mutex);
  std::vector<std::string> names;
  for (const auto& entry : reg.entries) names.emplace_back(entry->name());
  return names;
}

ModelParams::ModelParams(const ModelOptions& options)
    : interaction_(&find_interaction(options.kind)),
      kind_(options.kind),
      dim_(options.dim),
      num_entities_(options.num_entities),
      num_relations_base_(options.num_relations),
      inverse_relations_(options.inverse_relations),
      p_norm_(options.p_norm) {
  if (dim_ == 0) throw Error(ErrorCode::kInvalidArgument, "dim must be >= 1");
  if (num_entities_ == 0 || num_relations_base_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "entity and relation counts must be >= 1");
  }
  if (p_norm_ != 1 && p_norm_ != 2) {
    throw Error(ErrorCode::kInvalidArgument, "p_norm must be 1 or 2");
  }
  for (const TableSpec& spec : interaction_->table_specs(dim_)) {
    Table table;
    table.name = spec.name;
    table.role = spec.role;
    table.rows = spec.role == TableRole::kEntity ? num_entities_ : num_relations();
    table.width = spec.width;
    table.values.assign(table.rows * table.width, 0.0);
    tables_.push_back(std::move(table));
  }
}

std::size_t ModelParams::max_row_width() const {
  std::size_t w = 0;
  for (const Table& t : tables_) w = std::max(w, t.width);
  return w;
}

std::size_t ModelParams::num_parameters() const {
  std::size_t n = 0;
  for (const Table& t : tables_) n += t.values.size();
  return n;
}

ModelParams init_model(const ModelOptions& options) {
  ModelParams params(options);
  std::mt19937_64 rng(options.seed);
  params.interaction().initialize(params, options.init, rng);
  return params;
}

void check_triple(const ModelParams& params, const Triple& t) {
  if (t.head >= params.num_entities() || t.tail >= params.num_entities() ||
      t.relation >= params.num_relations()) {
    throw Error(ErrorCode::kIdOutOfRange, "triple (" + std::to_string(t.head) + ", " +
                                              std::to_string(t.relation) + ", " +
                                              std::to_string(t.tail) + ") out of range");
  }
}

std::vector<double> score_hrt(const ModelParams& params, std::span<const Triple> batch) {
  std::vector<double> scores;
  scores.reserve(batch.size());
  for (const Triple& t : batch) {
    check_triple(params, t);
    scores.push_back(params.interaction().score(params, t));
  }
  return scores;
}

ScoreMatrix score_all_tails(const ModelParams& params, std::span<const HeadRelation> pairs) {
  const std::size_t n = params.num_entities();
  ScoreMatrix m{pairs.size(), n, std::vector<double>(pairs.size() * n)};
  const Interaction& model = params.interaction();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    Triple t{pairs[i].first, pairs[i].second, 0};
    check_triple(params, t);
    for (std::size_t e = 0; e < n; ++e) {
      t.tail = static_cast<EntityId>(e);
      m.values[i * n + e] = model.score(params, t);
    }
  }
  return m;
}

ScoreMatrix score_all_heads(const ModelParams& params, std::span<const RelationTail> pairs) {
  if (params.inverse_relations()) {
    std::vector<HeadRelation> inverted;
    inverted.reserve(pairs.size());
    for (const auto& [r, t] : pairs) {
      if (r >= params.num_relations_base()) {
        throw Error(ErrorCode::kInverseNotAvailable,
                    "relation " + std::to_string(r) + " is already in the inverse block");
      }
      inverted.emplace_back(t, inverse_relation(r, params.num_relations_base()));
    }
    return score_all_tails(params, inverted);
  }
  const std::size_t n = params.num_entities();
  ScoreMatrix m{pairs.size(), n, std::vector<double>(pairs.size() * n)};
  const Interaction& model = params.interaction();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    Triple t{0, pairs[i].first, pairs[i].second};
    check_triple(params, t);
    for (std::size_t e = 0; e < n; ++e) {
      t.head = static_cast<EntityId>(e);
      m.values[i * n + e] = model.score(params, t);
    }
  }
  return m;
}

void accumulate_score_grad(const ModelParams& params, const Triple& triple, double upstream,
                           Gradients& out) {
  params.interaction().accumulate_gradient(params, triple, upstream, out);
}

Gradients score_grad(const ModelParams& params, std::span<const Triple> batch,
                     std::span<const double> upstream) {
  if (upstream.size() != batch.size()) {
    throw Error(ErrorCode::kShapeMismatch, "upstream length differs from batch length");
  }
  for (double u : upstream) {
    if (!std::isfinite(u)) throw Error(ErrorCode::kNonFiniteUpstream, "non-finite upstream");
  }
  Gradients out;
  for (std::size_t j = 0; j < batch.size(); ++j) {
    check_triple(params, batch[j]);
    if (upstream[j] == 0.0) continue;
    params.interaction().accumulate_gradient(params, batch[j], upstream[j], out);
  }
  return out;
}

void touched_rows(const ModelParams& params, const Triple& triple, std::vector<RowKey>& out) {
  const auto& tables = params.tables();
  for (std::uint32_t i = 0; i < tables.size(); ++i) {
    if (tables[i].role == TableRole::kEntity) {
      out.push_back({i, triple.head});
      if (triple.tail != triple.head) out.push_back({i, triple.tail});
    } else {
      out.push_back({i, triple.relation});
    }
  }
}

}  // namespace kgemf
