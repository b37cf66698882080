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

#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kgemf/checkpoint.hpp"
#include "kgemf/config.hpp"
#include "kgemf/error.hpp"
#include "kgemf/evaluation.hpp"
#include "kgemf/graph.hpp"
#include "kgemf/hpo.hpp"
#include "kgemf/pipeline.hpp"

namespace kgemf::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kIncompatibleComposition:
      return kExitInvalidConfig;
    default:
      return kExitFailure;
  }
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    fn();
    return kExitOk;
  } catch (const Error& e) {
    err << "kgemf: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "kgemf: " << e.what() << "\n";
    return kExitFailure;
  }
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

void write_json(const fs::path& path, const ordered_json& doc) {
  write_file(path, doc.dump(2) + "\n");
}

json read_config_document(const fs::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig,
                "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

fs::path config_dir(const fs::path& config) {
  return fs::absolute(config).parent_path();
}

}  // namespace

int cmd_split(const SplitArgs& args, std::ostream& err) {
  return guarded(err, [&] {
    if (args.ratios.size() != 3) {
      throw Error(ErrorCode::kInvalidConfig, "--ratios needs three values");
    }
    const SplitRatios ratios{args.ratios[0], args.ratios[1], args.ratios[2]};
    const ParseResult parsed = parse_triples(read_text_file(args.input));
    const DatasetSplits splits = random_split(parsed.triples, ratios, args.seed);
    write_file(args.out / "train.tsv", serialize_triples(splits.train, parsed.vocabulary));
    write_file(args.out / "valid.tsv", serialize_triples(splits.validation, parsed.vocabulary));
    write_file(args.out / "test.tsv", serialize_triples(splits.test, parsed.vocabulary));
  });
}

int cmd_train(const TrainArgs& args, std::ostream& err) {
  return guarded(err, [&] {
    json doc = read_config_document(args.config);
    if (!doc.is_object()) throw Error(ErrorCode::kInvalidConfig, "config must be an object");
    if (args.seed) doc = override_seed(std::move(doc), *args.seed);
    if (args.out) doc["output_dir"] = fs::absolute(*args.out).string();
    if (args.unfiltered) doc["evaluation"]["filtered"] = false;
    const RunConfig config = parse_run_config(doc, config_dir(args.config));

    const Dataset data = load_dataset(config.dataset);
    const RunOutcome outcome = run_pipeline(config, data);

    const fs::path& out = config.output_dir;
    fs::create_directories(out);
    save_checkpoint(out / "model.kgemf", outcome.params, data.vocabulary);
    write_json(out / "metrics.json", metrics_json(*outcome.test));
    write_json(out / "manifest.json", manifest_json(config, data, outcome));
  });
}

int cmd_evaluate(const EvaluateArgs& args, std::ostream& err) {
  return guarded(err, [&] {
    const Checkpoint ck = load_checkpoint(args.checkpoint);
    const TripleSet test = map_triples(read_text_file(args.test), ck.vocabulary);
    std::vector<Triple> known = test.triples();
    for (const fs::path& path : args.known) {
      const TripleSet extra = map_triples(read_text_file(path), ck.vocabulary);
      known.insert(known.end(), extra.triples().begin(), extra.triples().end());
    }
    EvaluationOptions options;
    options.ks = args.ks;
    options.filtered = !args.unfiltered;
    const MetricReport report = evaluate(ck.params, test.triples(), known, options);
    write_json(args.out / "metrics.json", metrics_json(report));
  });
}

int cmd_hpo(const HpoArgs& args, std::ostream& err) {
  return guarded(err, [&] {
    json doc = read_config_document(args.config);
    if (!doc.is_object()) throw Error(ErrorCode::kInvalidConfig, "config must be an object");
    if (args.seed) doc = override_seed(std::move(doc), *args.seed);
    if (args.out) doc["output_dir"] = fs::absolute(*args.out).string();
    const fs::path base = config_dir(args.config);
    const RunConfig config = parse_run_config(doc, base);
    if (!config.hpo) throw Error(ErrorCode::kInvalidConfig, "hpo: section missing");

    const Dataset data = load_dataset(config.dataset);
    const HpoRun run = run_hpo_pipeline(doc, base, data);

    std::string log;
    for (const TrialRecord& trial : run.search.trials) log += trial_to_json(trial).dump() + "\n";
    const fs::path& out = config.output_dir;
    write_file(out / "trials.jsonl", log);
    write_json(out / "best_config.json", run.best_config);

    ordered_json report;
    report["best_trial"] = trial_to_json(run.search.best);
    report["metric"] = config.hpo->config.metric;
    report["n_retrain"] = run.retrain.reports.size();
    report["retrain_on_validation"] = config.hpo->config.retrain_on_validation;
    ordered_json mean = ordered_json::object();
    ordered_json stddev = ordered_json::object();
    for (const auto& [k, v] : run.retrain.mean) mean[k] = v;
    for (const auto& [k, v] : run.retrain.stddev) stddev[k] = v;
    report["mean"] = std::move(mean);
    report["stddev"] = std::move(stddev);
    ordered_json runs = ordered_json::array();
    for (const MetricMap& m : run.retrain.reports) {
      ordered_json r = ordered_json::object();
      for (const auto& [k, v] : m) r[k] = v;
      runs.push_back(std::move(r));
    }
    report["runs"] = std::move(runs);
    write_json(out / "final_report.json", report);
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Knowledge graph embedding pipeline"};
  app.name("kgemf");
  app.require_subcommand(1);

  SplitArgs split;
  std::string ratios = "0.8,0.1,0.1";
  auto* split_cmd = app.add_subcommand("split", "Split a TSV file into train/valid/test");
  split_cmd->add_option("--input,-i", split.input, "Raw triples (TSV)")->required();
  split_cmd->add_option("--ratios", ratios, "Train,validation,test fractions");
  split_cmd->add_option("--seed", split.seed, "Shuffle seed");
  split_cmd->add_option("--out,-o", split.out, "Output directory");

  TrainArgs train;
  std::uint64_t train_seed = 0;
  std::string train_out;
  auto* train_cmd = app.add_subcommand("train", "Train and test a model from a config file");
  train_cmd->add_option("--config,-c", train.config, "Run config (JSON)")->required();
  auto* train_seed_opt = train_cmd->add_option("--seed", train_seed, "Override every seed");
  auto* train_out_opt = train_cmd->add_option("--out,-o", train_out, "Output directory");
  train_cmd->add_flag("--unfiltered", train.unfiltered, "Use the raw ranking protocol");

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a checkpoint on a TSV file");
  eval_cmd->add_option("--checkpoint", eval.checkpoint, "Model checkpoint")->required();
  eval_cmd->add_option("--test", eval.test, "Evaluation triples (TSV)")->required();
  eval_cmd->add_option("--known", eval.known, "Extra TSV files used for filtering");
  eval_cmd->add_option("--ks", eval.ks, "Cut-offs for hits@k")->delimiter(',');
  eval_cmd->add_option("--out,-o", eval.out, "Output directory");
  eval_cmd->add_flag("--unfiltered", eval.unfiltered, "Use the raw ranking protocol");

  HpoArgs hpo;
  std::uint64_t hpo_seed = 0;
  std::string hpo_out;
  auto* hpo_cmd = app.add_subcommand("hpo", "Hyper-parameter search with final retraining");
  hpo_cmd->add_option("--config,-c", hpo.config, "Run config with an hpo section")->required();
  auto* hpo_seed_opt = hpo_cmd->add_option("--seed", hpo_seed, "Override every seed");
  auto* hpo_out_opt = hpo_cmd->add_option("--out,-o", hpo_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }

  if (*split_cmd) {
    std::stringstream in(ratios);
    split.ratios.clear();
    std::string part;
    while (std::getline(in, part, ',')) {
      try {
        split.ratios.push_back(std::stod(part));
      } catch (const std::exception&) {
        err << "kgemf: --ratios: '" << part << "' is not a number\n";
        return kExitInvalidConfig;
      }
    }
    return cmd_split(split, err);
  }
  if (*train_cmd) {
    if (*train_seed_opt) train.seed = train_seed;
    if (*train_out_opt) train.out = train_out;
    return cmd_train(train, err);
  }
  if (*eval_cmd) return cmd_evaluate(eval, err);
  if (*hpo_seed_opt) hpo.seed = hpo_seed;
  if (*hpo_out_opt) hpo.out = hpo_out;
  return cmd_hpo(hpo, err);
}

}  // namespace kgemf::cli
