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

#include "kgemf/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#include "kgemf/amo.hpp"
#include "kgemf/error.hpp"

namespace kgemf {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<Triple> Dataset::all_triples() const {
  std::vector<Triple> all;
  all.reserve(train.size() + validation.size() + test.size());
  for (const TripleSet* s : {&train, &validation, &test}) {
    all.insert(all.end(), s->triples().begin(), s->triples().end());
  }
  return all;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Dataset load_dataset(const DatasetSection& section) {
  Dataset data;
  if (section.train) {
    ParseResult parsed = parse_triples(read_text_file(*section.train));
    data.vocabulary = std::move(parsed.vocabulary);
    data.train = std::move(parsed.triples);
    data.duplicates_removed = parsed.duplicates_removed;
    const std::size_t e = data.vocabulary.num_entities();
    const std::size_t r = data.vocabulary.num_relations();
    if (section.validation) {
      data.validation = map_triples(read_text_file(*section.validation), data.vocabulary);
    } else {
      data.validation = TripleSet({}, e, r);
    }
    if (section.test) {
      data.test = map_triples(read_text_file(*section.test), data.vocabulary);
    } else {
      data.test = TripleSet({}, e, r);
    }
    return data;
  }
  std::string text;
  if (section.synthetic) {
    text = synthetic_kg_tsv(*section.synthetic);
  } else if (section.raw) {
    text = read_text_file(*section.raw);
  } else {
    throw Error(ErrorCode::kInvalidConfig, "dataset: no source configured");
  }
  ParseResult parsed = parse_triples(text);
  data.vocabulary = std::move(parsed.vocabulary);
  data.duplicates_removed = parsed.duplicates_removed;
  SplitReport report;
  DatasetSplits splits =
      random_split(parsed.triples, section.split_ratios, section.split_seed, &report);
  data.train = std::move(splits.train);
  data.validation = std::move(splits.validation);
  data.test = std::move(splits.test);
  data.split_report = report;
  return data;
}

std::optional<std::uint64_t> effective_memory_budget(const AmoSection& section) {
  if (const char* env = std::getenv(kMemoryBudgetEnv); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) {
      throw Error(ErrorCode::kInvalidConfig,
                  std::string(kMemoryBudgetEnv) + " must be a positive integer");
    }
    return v;
  }
  return section.memory_budget_bytes;
}

AmoReport plan_batches(const RunConfig& config, const ModelParams& params,
                       std::size_t train_items, std::size_t eval_queries) {
  const TrainConfig& tc = config.training.train;
  AmoReport report;
  report.budget_bytes = effective_memory_budget(config.amo);
  const std::size_t items = std::max<std::size_t>(train_items, 1);
  report.train_batch = config.training.batch_size_given
                           ? tc.batch_size
                           : std::min(config.amo.requested_batch.value_or(items), items);
  report.sub_batch = tc.sub_batch_size;
  report.eval_batch = config.evaluation.batch_size;
  if (!report.budget_bytes) return report;

  const MemoryBudget budget{*report.budget_bytes};
  const MemoryMode mode = tc.approach == TrainingApproach::kLCWA ? MemoryMode::kTrainLcwa
                                                                  : MemoryMode::kTrainSlcwa;
  const Probe train_probe =
      analytic_probe(memory_model_for(params, mode, tc.num_negatives, tc.optimizer.kind), budget);
  if (!config.training.batch_size_given) {
    const BatchSearchResult r = find_max_batch(report.train_batch, train_probe);
    report.train_batch = r.batch;
    report.probes += r.probes;
  } else if (!report.sub_batch) {
    const BatchSearchResult r = find_max_sub_batch(report.train_batch, train_probe);
    if (r.batch < report.train_batch) report.sub_batch = r.batch;
    report.probes += r.probes;
  }
  if (report.eval_batch == 0 && eval_queries > 0) {
    const Probe eval_probe = analytic_probe(
        memory_model_for(params, MemoryMode::kEval, 0, tc.optimizer.kind), budget);
    const BatchSearchResult r = find_max_batch(eval_queries, eval_probe);
    report.eval_batch = r.batch;
    report.probes += r.probes;
  }
  return report;
}

double metric_value(const MetricReport& report, const std::string& metric) {
  const auto flat = report.flatten();
  const auto it = flat.find(metric);
  if (it == flat.end()) {
    throw Error(ErrorCode::kInvalidConfig, "unknown metric '" + metric + "'");
  }
  return it->second;
}

namespace {

TripleSet merged(const TripleSet& a, const TripleSet& b) {
  std::vector<Triple> all = a.triples();
  all.insert(all.end(), b.triples().begin(), b.triples().end());
  return TripleSet(std::move(all), a.num_entities(), a.num_relations_base());
}

}  // namespace

RunOutcome run_pipeline(const RunConfig& config, const Dataset& data, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const TrainConfig& base_tc = config.training.train;

  ModelOptions mo;
  mo.kind = config.model.kind;
  mo.num_entities = data.vocabulary.num_entities();
  mo.num_relations = data.vocabulary.num_relations();
  mo.dim = config.model.dim;
  mo.inverse_relations = base_tc.inverse_relations;
  mo.p_norm = config.model.p_norm;
  mo.init = config.model.init;
  mo.seed = config.model.seed;

  RunOutcome outcome;
  outcome.params = init_model(mo);

  const TripleSet train_set =
      options.train_on_validation ? merged(data.train, data.validation) : data.train;
  if (train_set.empty()) throw Error(ErrorCode::kEmptyDataset, "training split is empty");

  std::size_t train_items = train_set.size();
  if (base_tc.approach == TrainingApproach::kLCWA) {
    train_items = build_lcwa_units(base_tc.inverse_relations ? add_inverse_relations(train_set)
                                                             : train_set)
                      .size();
  }
  const std::size_t eval_queries = std::max(data.validation.size(), data.test.size());
  outcome.amo = plan_batches(config, outcome.params, train_items, eval_queries);

  TrainConfig tc = base_tc;
  tc.batch_size = outcome.amo.train_batch;
  tc.sub_batch_size = outcome.amo.sub_batch;

  EvaluationOptions eo;
  eo.ks = config.evaluation.ks;
  eo.filtered = config.evaluation.filtered;
  eo.compute_auc = config.evaluation.auc;
  eo.batch_size = outcome.amo.eval_batch;

  const TripleSet known_valid = merged(data.train, data.validation);
  const bool early_stopping = config.training.early_stopping && !options.train_on_validation;
  if (early_stopping && data.validation.empty()) {
    throw Error(ErrorCode::kInvalidConfig,
                "training.early_stopping needs a non-empty validation split");
  }
  if (early_stopping) {
    EarlyStopper stopper(*config.training.early_stopping);
    EvaluationOptions es_eo = eo;
    es_eo.compute_auc = stopper.options().metric.rfind("auc", 0) == 0;
    const EvalFn eval = [&](const ModelParams& p) {
      outcome.validation =
          evaluate(p, data.validation.triples(), known_valid.triples(), es_eo);
      return metric_value(*outcome.validation, stopper.options().metric);
    };
    outcome.training = train(outcome.params, train_set, tc, &stopper, eval);
  } else {
    outcome.training = train(outcome.params, train_set, tc);
  }

  if (options.evaluate_validation) {
    if (data.validation.empty()) {
      throw Error(ErrorCode::kEmptyDataset, "validation split is empty");
    }
    outcome.validation = evaluate(outcome.params, data.validation.triples(),
                                  known_valid.triples(), eo);
  }
  if (options.evaluate_test) {
    if (data.test.empty()) throw Error(ErrorCode::kEmptyDataset, "test split is empty");
    outcome.test = evaluate(outcome.params, data.test.triples(), data.all_triples(), eo);
  }
  outcome.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return outcome;
}

std::string config_hash(const ordered_json& resolved) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : resolved.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ordered_json metrics_json(const MetricReport& report) {
  ordered_json out = ordered_json::object();
  for (const auto& [key, value] : report.flatten()) out[key] = value;
  return out;
}

ordered_json manifest_json(const RunConfig& config, const Dataset& data,
                           const RunOutcome& outcome) {
  ordered_json m;
  m["config_hash"] = config_hash(config.resolved);
  m["seeds"] = {{"model", config.model.seed},
                {"training", config.training.train.seed},
                {"split", config.dataset.split_seed}};
  ordered_json amo;
  if (outcome.amo.budget_bytes) {
    amo["memory_budget_bytes"] = *outcome.amo.budget_bytes;
  } else {
    amo["memory_budget_bytes"] = nullptr;
  }
  amo["batch_size"] = outcome.amo.train_batch;
  if (outcome.amo.sub_batch) {
    amo["sub_batch_size"] = *outcome.amo.sub_batch;
  } else {
    amo["sub_batch_size"] = nullptr;
  }
  amo["eval_batch_size"] = outcome.amo.eval_batch;
  amo["probes"] = outcome.amo.probes;
  m["amo"] = std::move(amo);
  m["dataset"] = {{"entities", data.vocabulary.num_entities()},
                  {"relations", data.vocabulary.num_relations()},
                  {"train", data.train.size()},
                  {"validation", data.validation.size()},
                  {"test", data.test.size()},
                  {"duplicates_removed", data.duplicates_removed}};
  if (data.split_report) m["dataset"]["moved_to_train"] = data.split_report->moved_to_train;
  m["epochs_run"] = outcome.training.epochs_run;
  if (outcome.training.stopped_epoch) {
    m["stopped_epoch"] = *outcome.training.stopped_epoch;
  } else {
    m["stopped_epoch"] = nullptr;
  }
  m["final_loss"] =
      outcome.training.loss_history.empty() ? 0.0 : outcome.training.loss_history.back();
  m["num_parameters"] = outcome.params.num_parameters();
  m["wall_seconds"] = outcome.wall_seconds;
  m["config"] = config.resolved;
  return m;
}

HpoRun run_hpo_pipeline(const json& document, const std::filesystem::path& base_dir,
                        const Dataset& data) {
  const RunConfig base = parse_run_config(document, base_dir);
  if (!base.hpo) throw Error(ErrorCode::kInvalidConfig, "hpo: section missing");
  if (data.validation.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "hpo needs a non-empty validation split");
  }
  const HpoConfig& hc = base.hpo->config;

  auto config_for = [&](const Assignment& a, std::uint64_t seed) {
    return parse_run_config(override_seed(apply_assignment(document, a), seed), base_dir);
  };

  const PipelineFn trial = [&](const Assignment& a, std::uint64_t seed) {
    const RunConfig cfg = config_for(a, seed);
    RunOptions ro;
    ro.evaluate_test = false;
    ro.evaluate_validation = true;
    const RunOutcome out = run_pipeline(cfg, data, ro);
    TrialOutcome t;
    t.objective = metric_value(*out.validation, hc.metric);
    t.epochs_run = out.training.epochs_run;
    t.stopped_early = out.training.stopped_epoch.has_value();
    return t;
  };

  HpoRun run;
  run.search = run_hpo(base.hpo->space, hc, trial);

  const RetrainFn retrain = [&](const Assignment& a, std::uint64_t seed) {
    const RunConfig cfg = config_for(a, seed);
    RunOptions ro;
    ro.train_on_validation = hc.retrain_on_validation;
    return run_pipeline(cfg, data, ro).test->flatten();
  };
  run.retrain = final_retrain(run.search.best.config, hc.n_retrain, hc.seed, retrain);

  ordered_json best = config_for(run.search.best.config, run.search.best.seed).resolved;
  best.erase("hpo");
  run.best_config = std::move(best);
  return run;
}

}  // namespace kgemf
