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

#include "kgemf/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>
#include <vector>

#include "kgemf/error.hpp"

namespace kgemf {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& why) {
  throw Error(ErrorCode::kInvalidConfig, path + ": " + why);
}

// Reads one JSON object, remembering which keys were consumed so that any
// leftover key can be rejected.
template <typename T>
struct IsVector : std::false_type {};
template <typename T>
struct IsVector<std::vector<T>> : std::true_type {};

// nlohmann converts -1 to a huge unsigned and 1.5 to 1; reject both.
template <typename T>
T strict_get(const json& v) {
  if constexpr (IsVector<T>::value) {
    if (!v.is_array()) throw json::type_error::create(302, "expected an array", &v);
    T out;
    for (const json& item : v) out.push_back(strict_get<typename T::value_type>(item));
    return out;
  } else if constexpr (std::is_same_v<T, bool>) {
    return v.get<bool>();
  } else if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw json::type_error::create(302, "expected a non-negative integer", &v);
    }
    return v.get<T>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw json::type_error::create(302, "expected an integer", &v);
    return v.get<T>();
  } else {
    return v.get<T>();
  }
}

class Section {
 public:
  Section(const json* node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_ != nullptr && !node_->is_null() && !node_->is_object()) bad(path_, "expected an object");
    if (node_ != nullptr && node_->is_null()) node_ = nullptr;
  }

  bool has(const char* key) const { return node_ != nullptr && node_->contains(key); }
  bool present() const { return node_ != nullptr; }

  template <typename T>
  std::optional<T> get(const char* key) {
    seen_.insert(key);
    if (!has(key) || node_->at(key).is_null()) return std::nullopt;
    try {
      return strict_get<T>(node_->at(key));
    } catch (const json::exception&) {
      bad(full(key), "wrong type");
    }
  }

  template <typename T>
  T get_or(const char* key, T fallback) {
    return get<T>(key).value_or(std::move(fallback));
  }

  const json* raw(const char* key) {
    seen_.insert(key);
    return has(key) ? &node_->at(key) : nullptr;
  }

  Section child(const char* key) {
    seen_.insert(key);
    return Section(has(key) ? &node_->at(key) : nullptr, full(key));
  }

  void finish() const {
    if (node_ == nullptr) return;
    for (const auto& [key, value] : node_->items()) {
      if (!seen_.count(key)) bad(full(key.c_str()), "unknown key");
    }
  }

  std::string full(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json* node_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename T>
T positive(std::optional<T> v, T fallback, const std::string& path) {
  const T x = v.value_or(fallback);
  if (!(x > 0)) bad(path, "must be > 0");
  return x;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.lexically_normal();
}

template <typename Fn>
auto convert(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIncompatibleLoss) throw;
    bad(path, e.what());
  }
}

}  // namespace

RunConfig parse_run_config(const json& document, const std::filesystem::path& base_dir) {
  if (!document.is_object()) bad("config", "top level must be an object");
  RunConfig cfg;
  Section root(&document, "");

  // dataset
  {
    Section ds = root.child("dataset");
    if (auto p = ds.get<std::string>("train")) cfg.dataset.train = resolve(base_dir, *p);
    if (auto p = ds.get<std::string>("validation")) cfg.dataset.validation = resolve(base_dir, *p);
    if (auto p = ds.get<std::string>("test")) cfg.dataset.test = resolve(base_dir, *p);
    if (auto p = ds.get<std::string>("raw")) cfg.dataset.raw = resolve(base_dir, *p);
    if (auto r = ds.get<std::vector<double>>("split_ratios")) {
      if (r->size() != 3) bad("dataset.split_ratios", "expected three fractions");
      cfg.dataset.split_ratios = {(*r)[0], (*r)[1], (*r)[2]};
      const double sum = (*r)[0] + (*r)[1] + (*r)[2];
      if ((*r)[0] < 0 || (*r)[1] < 0 || (*r)[2] < 0 || std::abs(sum - 1.0) > 1e-9) {
        bad("dataset.split_ratios", "fractions must be >= 0 and sum to 1");
      }
    }
    cfg.dataset.split_seed = ds.get_or<std::uint64_t>("split_seed", 0);
    Section syn = ds.child("synthetic");
    if (syn.present()) {
      SyntheticKgOptions o;
      o.num_entities = syn.get_or<std::size_t>("num_entities", o.num_entities);
      o.seed = syn.get_or<std::uint64_t>("seed", o.seed);
      if (o.num_entities < 8) bad("dataset.synthetic.num_entities", "must be >= 8");
      cfg.dataset.synthetic = o;
    }
    syn.finish();
    const int sources = (cfg.dataset.synthetic ? 1 : 0) + (cfg.dataset.raw ? 1 : 0) +
                        (cfg.dataset.train ? 1 : 0);
    if (sources != 1) bad("dataset", "set exactly one of 'synthetic', 'raw' or 'train'");
    if (!cfg.dataset.train && (cfg.dataset.validation || cfg.dataset.test)) {
      bad("dataset", "'validation'/'test' files require 'train'");
    }
    ds.finish();
  }

  // model
  {
    Section m = root.child("model");
    cfg.model.kind = m.get_or<std::string>("kind", cfg.model.kind);
    convert("model.kind", [&] { return &find_interaction(cfg.model.kind); });
    cfg.model.dim = positive<std::size_t>(m.get<std::size_t>("dim"), cfg.model.dim, "model.dim");
    cfg.model.init = convert("model.init", [&] {
      return parse_init_scheme(m.get_or<std::string>("init", "uniform_xavier"));
    });
    cfg.model.seed = m.get_or<std::uint64_t>("seed", 0);
    cfg.model.p_norm = m.get_or<int>("p_norm", 2);
    if (cfg.model.p_norm != 1 && cfg.model.p_norm != 2) bad("model.p_norm", "must be 1 or 2");
    m.finish();
  }

  // training
  {
    Section t = root.child("training");
    TrainConfig& tc = cfg.training.train;
    tc.approach = convert("training.approach", [&] {
      return parse_approach(t.get_or<std::string>("approach", "sLCWA"));
    });
    Section loss = t.child("loss");
    tc.loss.type = convert("training.loss.kind", [&] {
      return parse_loss_type(loss.get_or<std::string>("kind", "MarginRanking"));
    });
    tc.loss.margin = loss.get_or<double>("margin", 1.0);
    tc.loss.temperature = loss.get_or<double>("temperature", 1.0);
    tc.loss.reduction = convert("training.loss.reduction", [&] {
      return parse_reduction(loss.get_or<std::string>("reduction", "mean"));
    });
    convert("training.loss", [&] {
      validate_loss(tc.loss);
      return 0;
    });
    loss.finish();

    Section opt = t.child("optimizer");
    tc.optimizer.kind = convert("training.optimizer.kind", [&] {
      return parse_optimizer_kind(opt.get_or<std::string>("kind", "Adam"));
    });
    tc.optimizer.learning_rate = opt.get_or<double>("learning_rate", 0.01);
    tc.optimizer.beta1 = opt.get_or<double>("beta1", 0.9);
    tc.optimizer.beta2 = opt.get_or<double>("beta2", 0.999);
    tc.optimizer.epsilon = opt.get_or<double>("epsilon", 1e-8);
    convert("training.optimizer", [&] { return Optimizer(tc.optimizer).spec().kind; });
    opt.finish();

    if (auto bs = t.get<std::size_t>("batch_size")) {
      if (*bs == 0) bad("training.batch_size", "must be >= 1");
      tc.batch_size = *bs;
    } else {
      cfg.training.batch_size_given = false;
    }
    tc.sub_batch_size = t.get<std::size_t>("sub_batch_size");
    tc.num_negatives = t.get_or<std::size_t>("num_negatives", 1);
    tc.epochs = t.get_or<std::size_t>("epochs", 100);
    tc.seed = t.get_or<std::uint64_t>("seed", 0);
    Section reg = t.child("regularizer");
    tc.regularizer.kind = convert("training.regularizer.kind", [&] {
      return parse_regularizer_kind(reg.get_or<std::string>("kind", "NoOp"));
    });
    tc.regularizer.weight = reg.get_or<double>("weight", 0.0);
    tc.regularizer.p = reg.get_or<double>("p", 3.0);
    convert("training.regularizer", [&] { return make_regularizer(tc.regularizer) != nullptr; });
    reg.finish();
    tc.inverse_relations = t.get_or<bool>("inverse_relations", false);
    tc.corruption = convert("training.corruption", [&] {
      return parse_corruption_mode(t.get_or<std::string>("corruption", "both"));
    });

    Section es = t.child("early_stopping");
    if (es.present()) {
      EarlyStopperOptions o;
      o.patience = es.get_or<std::size_t>("patience", o.patience);
      o.frequency = positive<std::size_t>(es.get<std::size_t>("frequency"), o.frequency,
                                          "training.early_stopping.frequency");
      o.relative_delta = es.get_or<double>("relative_delta", o.relative_delta);
      if (!(o.relative_delta >= 0)) bad("training.early_stopping.relative_delta", "must be >= 0");
      o.metric = es.get_or<std::string>("metric", o.metric);
      const std::string dir = es.get_or<std::string>("direction", "maximize");
      if (dir != "maximize" && dir != "minimize") {
        bad("training.early_stopping.direction", "must be 'maximize' or 'minimize'");
      }
      o.maximize = dir == "maximize";
      cfg.training.early_stopping = o;
    }
    es.finish();
    t.finish();

    if (!is_compatible(tc.approach, tc.loss.type)) {
      throw Error(ErrorCode::kIncompatibleComposition,
                  "loss '" + std::string(loss_type_name(tc.loss.type)) +
                      "' cannot be combined with training approach '" +
                      std::string(approach_name(tc.approach)) + "'");
    }
    if (tc.approach == TrainingApproach::kSLCWA && tc.num_negatives == 0) {
      bad("training.num_negatives", "sLCWA needs at least one negative");
    }
    if (tc.sub_batch_size && (*tc.sub_batch_size == 0 ||
                              (cfg.training.batch_size_given && *tc.sub_batch_size > tc.batch_size))) {
      bad("training.sub_batch_size", "must be in [1, batch_size]");
    }
  }

  // evaluation
  {
    Section e = root.child("evaluation");
    cfg.evaluation.ks = e.get_or<std::vector<std::size_t>>("ks", cfg.evaluation.ks);
    if (cfg.evaluation.ks.empty()) bad("evaluation.ks", "must not be empty");
    for (std::size_t k : cfg.evaluation.ks) {
      if (k == 0) bad("evaluation.ks", "entries must be >= 1");
    }
    std::sort(cfg.evaluation.ks.begin(), cfg.evaluation.ks.end());
    cfg.evaluation.ks.erase(std::unique(cfg.evaluation.ks.begin(), cfg.evaluation.ks.end()),
                            cfg.evaluation.ks.end());
    cfg.evaluation.filtered = e.get_or<bool>("filtered", true);
    cfg.evaluation.auc = e.get_or<bool>("auc", true);
    cfg.evaluation.batch_size = e.get_or<std::size_t>("batch_size", 0);
    e.finish();
  }

  // hpo
  {
    Section h = root.child("hpo");
    if (h.present()) {
      HpoSection hs;
      hs.config.sampler = convert("hpo.sampler", [&] {
        return parse_sampler_kind(h.get_or<std::string>("sampler", "grid"));
      });
      hs.config.budget = positive<std::size_t>(h.get<std::size_t>("budget"), 1, "hpo.budget");
      hs.config.metric = h.get_or<std::string>("metric", hs.config.metric);
      const std::string dir = h.get_or<std::string>("direction", "maximize");
      if (dir != "maximize" && dir != "minimize") {
        bad("hpo.direction", "must be 'maximize' or 'minimize'");
      }
      hs.config.maximize = dir == "maximize";
      hs.config.n_retrain =
          positive<std::size_t>(h.get<std::size_t>("n_retrain"), 1, "hpo.n_retrain");
      hs.config.seed = h.get_or<std::uint64_t>("seed", 0);
      hs.config.retrain_on_validation = h.get_or<bool>("retrain_on_validation", false);
      const json* space = h.raw("space");
      if (space == nullptr) bad("hpo.space", "missing");
      hs.space = parse_search_space(*space);
      hs.space_json = *space;
      const std::vector<std::string> keys = config_keys();
      for (const auto& dim : hs.space.dimensions()) {
        if (dim.name.rfind("hpo.", 0) == 0 || dim.name.rfind("dataset.", 0) == 0 ||
            std::find(keys.begin(), keys.end(), dim.name) == keys.end()) {
          bad("hpo.space", "dimension '" + dim.name + "' is not a tunable config key");
        }
      }
      cfg.hpo = std::move(hs);
    }
    h.finish();
  }

  // amo
  {
    Section a = root.child("amo");
    cfg.amo.memory_budget_bytes = a.get<std::uint64_t>("memory_budget_bytes");
    if (cfg.amo.memory_budget_bytes && *cfg.amo.memory_budget_bytes == 0) {
      bad("amo.memory_budget_bytes", "must be > 0");
    }
    cfg.amo.requested_batch = a.get<std::size_t>("requested_batch");
    if (cfg.amo.requested_batch && *cfg.amo.requested_batch == 0) {
      bad("amo.requested_batch", "must be >= 1");
    }
    a.finish();
  }

  if (auto out = root.get<std::string>("output_dir")) cfg.output_dir = resolve(base_dir, *out);
  root.finish();

  // Resolved view, used for manifests and best-config documents.
  ordered_json r;
  auto& ds = r["dataset"];
  if (cfg.dataset.synthetic) {
    ds["synthetic"] = {{"num_entities", cfg.dataset.synthetic->num_entities},
                       {"seed", cfg.dataset.synthetic->seed}};
  }
  if (cfg.dataset.raw) ds["raw"] = cfg.dataset.raw->string();
  if (cfg.dataset.train) ds["train"] = cfg.dataset.train->string();
  if (cfg.dataset.validation) ds["validation"] = cfg.dataset.validation->string();
  if (cfg.dataset.test) ds["test"] = cfg.dataset.test->string();
  ds["split_ratios"] = {cfg.dataset.split_ratios.train, cfg.dataset.split_ratios.validation,
                        cfg.dataset.split_ratios.test};
  ds["split_seed"] = cfg.dataset.split_seed;
  r["model"] = {{"kind", cfg.model.kind},
                {"dim", cfg.model.dim},
                {"init", init_scheme_name(cfg.model.init)},
                {"seed", cfg.model.seed},
                {"p_norm", cfg.model.p_norm}};
  const TrainConfig& tc = cfg.training.train;
  auto& tr = r["training"];
  tr["approach"] = approach_name(tc.approach);
  tr["loss"] = {{"kind", loss_type_name(tc.loss.type)},
                {"margin", tc.loss.margin},
                {"temperature", tc.loss.temperature},
                {"reduction", reduction_name(tc.loss.reduction)}};
  tr["optimizer"] = {{"kind", optimizer_kind_name(tc.optimizer.kind)},
                     {"learning_rate", tc.optimizer.learning_rate},
                     {"beta1", tc.optimizer.beta1},
                     {"beta2", tc.optimizer.beta2},
                     {"epsilon", tc.optimizer.epsilon}};
  if (cfg.training.batch_size_given) tr["batch_size"] = tc.batch_size;
  if (tc.sub_batch_size) tr["sub_batch_size"] = *tc.sub_batch_size;
  tr["num_negatives"] = tc.num_negatives;
  tr["epochs"] = tc.epochs;
  tr["seed"] = tc.seed;
  tr["regularizer"] = {{"kind", regularizer_kind_name(tc.regularizer.kind)},
                       {"weight", tc.regularizer.weight},
                       {"p", tc.regularizer.p}};
  tr["inverse_relations"] = tc.inverse_relations;
  tr["corruption"] = corruption_mode_name(tc.corruption);
  if (cfg.training.early_stopping) {
    const auto& es = *cfg.training.early_stopping;
    tr["early_stopping"] = {{"patience", es.patience},
                            {"frequency", es.frequency},
                            {"relative_delta", es.relative_delta},
                            {"metric", es.metric},
                            {"direction", es.maximize ? "maximize" : "minimize"}};
  }
  r["evaluation"] = {{"ks", cfg.evaluation.ks},
                     {"filtered", cfg.evaluation.filtered},
                     {"auc", cfg.evaluation.auc},
                     {"batch_size", cfg.evaluation.batch_size}};
  if (cfg.hpo) {
    const auto& h = cfg.hpo->config;
    r["hpo"] = {{"sampler", sampler_kind_name(h.sampler)},
                {"budget", h.budget},
                {"metric", h.metric},
                {"direction", h.maximize ? "maximize" : "minimize"},
                {"n_retrain", h.n_retrain},
                {"seed", h.seed},
                {"retrain_on_validation", h.retrain_on_validation},
                {"space", cfg.hpo->space_json}};
  }
  auto& amo = r["amo"];
  amo = ordered_json::object();
  if (cfg.amo.memory_budget_bytes) amo["memory_budget_bytes"] = *cfg.amo.memory_budget_bytes;
  if (cfg.amo.requested_batch) amo["requested_batch"] = *cfg.amo.requested_batch;
  r["output_dir"] = cfg.output_dir.string();
  cfg.resolved = std::move(r);
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read config '" + path.string() + "'");
  json document;
  try {
    in >> document;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, "config is not valid JSON: " + std::string(e.what()));
  }
  return parse_run_config(document, path.parent_path());
}

std::vector<std::string> config_keys() {
  return {
      "dataset.train",
      "dataset.validation",
      "dataset.test",
      "dataset.raw",
      "dataset.split_ratios",
      "dataset.split_seed",
      "dataset.synthetic.num_entities",
      "dataset.synthetic.seed",
      "model.kind",
      "model.dim",
      "model.init",
      "model.seed",
      "model.p_norm",
      "training.approach",
      "training.loss.kind",
      "training.loss.margin",
      "training.loss.temperature",
      "training.loss.reduction",
      "training.optimizer.kind",
      "training.optimizer.learning_rate",
      "training.optimizer.beta1",
      "training.optimizer.beta2",
      "training.optimizer.epsilon",
      "training.batch_size",
      "training.sub_batch_size",
      "training.num_negatives",
      "training.epochs",
      "training.seed",
      "training.regularizer.kind",
      "training.regularizer.weight",
      "training.regularizer.p",
      "training.inverse_relations",
      "training.corruption",
      "training.early_stopping.patience",
      "training.early_stopping.frequency",
      "training.early_stopping.relative_delta",
      "training.early_stopping.metric",
      "training.early_stopping.direction",
      "evaluation.ks",
      "evaluation.filtered",
      "evaluation.auc",
      "evaluation.batch_size",
      "hpo.sampler",
      "hpo.budget",
      "hpo.metric",
      "hpo.direction",
      "hpo.n_retrain",
      "hpo.seed",
      "hpo.retrain_on_validation",
      "hpo.space",
      "amo.memory_budget_bytes",
      "amo.requested_batch",
      "output_dir",
  };
}

json apply_assignment(json document, const Assignment& assignment) {
  for (const auto& [key, value] : assignment.items()) {
    json* node = &document;
    std::stringstream parts(key);
    std::string part;
    std::vector<std::string> path;
    while (std::getline(parts, part, '.')) path.push_back(part);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      if (!node->is_object()) bad(key, "cannot descend into a non-object");
      node = &(*node)[path[i]];
      if (node->is_null()) *node = json::object();
    }
    (*node)[path.back()] = value;
  }
  return document;
}

json override_seed(json document, std::uint64_t seed) {
  document["model"]["seed"] = seed;
  document["training"]["seed"] = seed;
  if (document.contains("hpo") && document["hpo"].is_object()) document["hpo"]["seed"] = seed;
  return document;
}

}  // namespace kgemf
