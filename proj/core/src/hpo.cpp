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

#include "kgemf/hpo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "kgemf/error.hpp"

namespace kgemf {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void invalid(const std::string& name, const std::string& why) {
  throw Error(ErrorCode::kInvalidArgument, "dimension '" + name + "': " + why);
}

std::vector<std::int64_t> integer_values(const IntegerDomain& d) {
  std::vector<std::int64_t> out;
  for (std::int64_t v = d.low; v <= d.high; v += d.step) out.push_back(v);
  return out;
}

std::vector<json> grid_values(const Dimension& dim) {
  return std::visit(
      Overloaded{
          [](const CategoricalDomain& d) { return d.values; },
          [](const IntegerDomain& d) {
            std::vector<json> out;
            for (auto v : integer_values(d)) out.emplace_back(v);
            return out;
          },
          [&](const RealDomain& d) {
            std::vector<json> out;
            if (!d.points.empty()) {
              for (double v : d.points) out.emplace_back(v);
              return out;
            }
            if (!d.step) {
              throw Error(ErrorCode::kInfiniteDimension,
                          "real dimension '" + dim.name + "' needs a step or grid points");
            }
            const double slack = 1e-12 * std::max(std::abs(d.low), std::abs(d.high));
            for (std::size_t i = 0;; ++i) {
              const double v = d.scale == Scale::kLinear
                                   ? d.low + static_cast<double>(i) * *d.step
                                   : d.low * std::pow(*d.step, static_cast<double>(i));
              if (v > d.high + slack) break;
              out.emplace_back(v);
            }
            return out;
          },
      },
      dim.domain);
}

}  // namespace

void SearchSpace::add(Dimension dimension) {
  const std::string& name = dimension.name;
  if (name.empty()) invalid(name, "empty name");
  for (const auto& d : dimensions_) {
    if (d.name == name) invalid(name, "duplicate name");
  }
  std::visit(Overloaded{
                 [&](const CategoricalDomain& d) {
                   if (d.values.empty()) invalid(name, "no values");
                 },
                 [&](const IntegerDomain& d) {
                   if (d.low >= d.high) invalid(name, "low must be < high");
                   if (d.step <= 0) invalid(name, "step must be > 0");
                 },
                 [&](const RealDomain& d) {
                   if (!(d.low < d.high)) invalid(name, "low must be < high");
                   if (d.scale == Scale::kLog && !(d.low > 0.0)) {
                     invalid(name, "log scale needs low > 0");
                   }
                   if (d.step) {
                     if (d.scale == Scale::kLinear && !(*d.step > 0.0)) {
                       invalid(name, "step must be > 0");
                     }
                     if (d.scale == Scale::kLog && !(*d.step > 1.0)) {
                       invalid(name, "log-scale step is a factor and must be > 1");
                     }
                   }
                   for (double p : d.points) {
                     if (!(p >= d.low && p <= d.high)) invalid(name, "grid point out of range");
                   }
                 },
             },
             dimension.domain);
  dimensions_.push_back(std::move(dimension));
}

SearchSpace parse_search_space(const json& spec) {
  if (!spec.is_array()) {
    throw Error(ErrorCode::kInvalidConfig, "search space must be an array of dimensions");
  }
  SearchSpace space;
  for (const json& item : spec) {
    if (!item.is_object()) throw Error(ErrorCode::kInvalidConfig, "dimension must be an object");
    const std::string name = item.value("name", "");
    const std::string type = item.value("type", "");
    auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
      for (const auto& [key, value] : item.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end()) {
          throw Error(ErrorCode::kInvalidConfig,
                      "unknown key '" + key + "' in dimension '" + name + "'");
        }
      }
    };
    Dimension dim;
    dim.name = name;
    try {
      if (type == "categorical") {
        reject_unknown({"name", "type", "values"});
        dim.domain = CategoricalDomain{item.at("values").get<std::vector<json>>()};
      } else if (type == "int") {
        reject_unknown({"name", "type", "low", "high", "step"});
        dim.domain = IntegerDomain{item.at("low").get<std::int64_t>(),
                                   item.at("high").get<std::int64_t>(),
                                   item.value("step", std::int64_t{1})};
      } else if (type == "real") {
        reject_unknown({"name", "type", "low", "high", "scale", "step", "points"});
        RealDomain d;
        d.low = item.at("low").get<double>();
        d.high = item.at("high").get<double>();
        const std::string scale = item.value("scale", "linear");
        if (scale != "linear" && scale != "log") {
          throw Error(ErrorCode::kInvalidConfig, "scale must be 'linear' or 'log'");
        }
        d.scale = scale == "log" ? Scale::kLog : Scale::kLinear;
        if (item.contains("step")) d.step = item.at("step").get<double>();
        if (item.contains("points")) d.points = item.at("points").get<std::vector<double>>();
        dim.domain = d;
      } else {
        throw Error(ErrorCode::kInvalidConfig,
                    "dimension '" + name + "' has unknown type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kInvalidConfig, "dimension '" + name + "': " + e.what());
    }
    try {
      space.add(std::move(dim));
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidConfig, e.what());
    }
  }
  return space;
}

std::vector<Assignment> grid_iter(const SearchSpace& space) {
  std::vector<std::vector<json>> values;
  for (const auto& dim : space.dimensions()) values.push_back(grid_values(dim));
  std::vector<Assignment> out;
  if (values.empty()) return out;
  std::vector<std::size_t> index(values.size(), 0);
  while (true) {
    Assignment a = Assignment::object();
    for (std::size_t d = 0; d < values.size(); ++d) {
      a[space.dimensions()[d].name] = values[d][index[d]];
    }
    out.push_back(std::move(a));
    // Odometer increment, last dimension fastest.
    std::size_t d = values.size();
    while (d > 0) {
      --d;
      if (++index[d] < values[d].size()) break;
      index[d] = 0;
      if (d == 0) return out;
    }
  }
}

std::vector<Assignment> random_sample(const SearchSpace& space, std::uint64_t seed,
                                      std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<Assignment> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Assignment a = Assignment::object();
    for (const auto& dim : space.dimensions()) {
      a[dim.name] = std::visit(
          Overloaded{
              [&](const CategoricalDomain& d) {
                std::uniform_int_distribution<std::size_t> pick(0, d.values.size() - 1);
                return d.values[pick(rng)];
              },
              [&](const IntegerDomain& d) {
                const std::int64_t steps = (d.high - d.low) / d.step;
                std::uniform_int_distribution<std::int64_t> pick(0, steps);
                return json(d.low + pick(rng) * d.step);
              },
              [&](const RealDomain& d) {
                if (!d.points.empty()) {
                  std::uniform_int_distribution<std::size_t> pick(0, d.points.size() - 1);
                  return json(d.points[pick(rng)]);
                }
                if (d.scale == Scale::kLog) {
                  std::uniform_real_distribution<double> u(std::log(d.low), std::log(d.high));
                  return json(std::clamp(std::exp(u(rng)), d.low, d.high));
                }
                std::uniform_real_distribution<double> u(d.low, d.high);
                return json(u(rng));
              },
          },
          dim.domain);
    }
    out.push_back(std::move(a));
  }
  return out;
}

bool within_bounds(const SearchSpace& space, const Assignment& assignment) {
  for (const auto& dim : space.dimensions()) {
    if (!assignment.contains(dim.name)) return false;
    const json& v = assignment.at(dim.name);
    const bool ok = std::visit(
        Overloaded{
            [&](const CategoricalDomain& d) {
              return std::find(d.values.begin(), d.values.end(), v) != d.values.end();
            },
            [&](const IntegerDomain& d) {
              if (!v.is_number_integer()) return false;
              const auto x = v.get<std::int64_t>();
              return x >= d.low && x <= d.high && (x - d.low) % d.step == 0;
            },
            [&](const RealDomain& d) {
              if (!v.is_number()) return false;
              const double x = v.get<double>();
              return x >= d.low && x <= d.high;
            },
        },
        dim.domain);
    if (!ok) return false;
  }
  return true;
}

std::string_view sampler_kind_name(SamplerKind kind) {
  return kind == SamplerKind::kGrid ? "grid" : "random";
}

SamplerKind parse_sampler_kind(std::string_view name) {
  if (name == "grid") return SamplerKind::kGrid;
  if (name == "random") return SamplerKind::kRandom;
  throw Error(ErrorCode::kInvalidArgument, "unknown sampler '" + std::string(name) + "'");
}

namespace {

class GridSampler final : public Sampler {
 public:
  std::string_view name() const override { return "grid"; }
  std::vector<Assignment> propose(const SearchSpace& space, std::size_t budget,
                                  std::uint64_t) const override {
    auto all = grid_iter(space);
    if (all.size() > budget) all.resize(budget);
    return all;
  }
};

class RandomSampler final : public Sampler {
 public:
  std::string_view name() const override { return "random"; }
  std::vector<Assignment> propose(const SearchSpace& space, std::size_t budget,
                                  std::uint64_t seed) const override {
    return random_sample(space, seed, budget);
  }
};

}  // namespace

std::unique_ptr<Sampler> make_sampler(SamplerKind kind) {
  if (kind == SamplerKind::kGrid) return std::make_unique<GridSampler>();
  return std::make_unique<RandomSampler>();
}

nlohmann::ordered_json trial_to_json(const TrialRecord& trial) {
  nlohmann::ordered_json j;
  j["trial"] = trial.index;
  j["config"] = trial.config;
  if (trial.failed) {
    j["objective"] = nullptr;
  } else {
    j["objective"] = trial.objective;
  }
  j["seed"] = trial.seed;
  j["epochs_run"] = trial.epochs_run;
  j["stopped_early"] = trial.stopped_early;
  j["failed"] = trial.failed;
  if (trial.failed) j["error"] = trial.error;
  return j;
}

HpoResult run_hpo(const SearchSpace& space, const HpoConfig& config, const PipelineFn& pipeline) {
  if (config.budget == 0) throw Error(ErrorCode::kInvalidArgument, "HPO budget must be >= 1");
  const auto sampler = make_sampler(config.sampler);
  const std::vector<Assignment> proposals = sampler->propose(space, config.budget, config.seed);

  HpoResult result;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < proposals.size() && i < config.budget; ++i) {
    TrialRecord trial;
    trial.index = i;
    trial.config = proposals[i];
    trial.seed = config.seed + i;
    try {
      const TrialOutcome outcome = pipeline(trial.config, trial.seed);
      trial.objective = outcome.objective;
      trial.epochs_run = outcome.epochs_run;
      trial.stopped_early = outcome.stopped_early;
      if (!std::isfinite(outcome.objective)) {
        trial.failed = true;
        trial.error = "non-finite objective";
      }
    } catch (const std::exception& e) {
      trial.failed = true;
      trial.error = e.what();
    }
    if (!trial.failed) {
      const bool better =
          !best || (config.maximize ? trial.objective > result.trials[*best].objective
                                    : trial.objective < result.trials[*best].objective);
      if (better) best = i;
    }
    result.trials.push_back(std::move(trial));
  }
  if (!best) throw Error(ErrorCode::kAllTrialsFailed, "every HPO trial failed");
  result.best = result.trials[*best];
  return result;
}

RetrainSummary final_retrain(const Assignment& best, std::size_t n, std::uint64_t base_seed,
                             const RetrainFn& retrain) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "n_retrain must be >= 1");
  RetrainSummary summary;
  for (std::size_t i = 0; i < n; ++i) summary.reports.push_back(retrain(best, base_seed + i));

  std::map<std::string, std::vector<double>> columns;
  for (const auto& report : summary.reports) {
    for (const auto& [key, value] : report) columns[key].push_back(value);
  }
  for (const auto& [key, values] : columns) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    if (values.size() > 1) {
      for (double v : values) var += (v - mean) * (v - mean);
      var /= static_cast<double>(values.size() - 1);
    }
    summary.mean[key] = mean;
    summary.stddev[key] = std::sqrt(var);
  }
  return summary;
}

}  // namespace kgemf
