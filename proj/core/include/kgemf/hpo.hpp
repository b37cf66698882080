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

#ifndef KGEMF_HPO_HPP_
#define KGEMF_HPO_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace kgemf {

// One sampled configuration: dimension name -> value, in dimension order.
using Assignment = nlohmann::ordered_json;

enum class Scale { kLinear, kLog };

struct CategoricalDomain {
  std::vector<nlohmann::json> values;
};

// low, low + step, ... up to high.
struct IntegerDomain {
  std::int64_t low = 0;
  std::int64_t high = 1;
  std::int64_t step = 1;
};

// Continuous for random search. Grid search needs explicit `points` or a
// `step` (additive on the linear scale, a multiplicative factor > 1 on the
// log scale).
struct RealDomain {
  double low = 0.0;
  double high = 1.0;
  Scale scale = Scale::kLinear;
  std::optional<double> step;
  std::vector<double> points;
};

struct Dimension {
  std::string name;
  std::variant<CategoricalDomain, IntegerDomain, RealDomain> domain;
};

class SearchSpace {
 public:
  // Throws kInvalidArgument on duplicate names, empty categoricals,
  // low >= high, a log range with low <= 0, or a non-positive step.
  void add(Dimension dimension);

  const std::vector<Dimension>& dimensions() const { return dimensions_; }
  bool empty() const { return dimensions_.empty(); }

 private:
  std::vector<Dimension> dimensions_;
};

// JSON form: an array of {"name", "type": "categorical"|"int"|"real", ...}.
SearchSpace parse_search_space(const nlohmann::json& spec);

// Every configuration of the cartesian product, first dimension varying
// slowest. Throws kInfiniteDimension for a real range without grid points.
std::vector<Assignment> grid_iter(const SearchSpace& space);

// Independent per-dimension draws; log-scale reals are uniform in log
// space. Deterministic in seed.
std::vector<Assignment> random_sample(const SearchSpace& space, std::uint64_t seed,
                                      std::size_t count);

bool within_bounds(const SearchSpace& space, const Assignment& assignment);

enum class SamplerKind { kGrid, kRandom };

std::string_view sampler_kind_name(SamplerKind kind);
SamplerKind parse_sampler_kind(std::string_view name);

// Proposes up to `budget` configurations. Grid and random ship; other
// strategies plug in here.
class Sampler {
 public:
  virtual ~Sampler() = default;
  virtual std::string_view name() const = 0;
  virtual std::vector<Assignment> propose(const SearchSpace& space, std::size_t budget,
                                          std::uint64_t seed) const = 0;
};

std::unique_ptr<Sampler> make_sampler(SamplerKind kind);

struct HpoConfig {
  SamplerKind sampler = SamplerKind::kGrid;
  std::size_t budget = 1;
  std::string metric = "both.average.mean_reciprocal_rank";
  bool maximize = true;
  std::size_t n_retrain = 1;
  std::uint64_t seed = 0;
  bool retrain_on_validation = false;
};

struct TrialOutcome {
  double objective = 0.0;
  std::size_t epochs_run = 0;
  bool stopped_early = false;
};

// Trains on the train split and returns the validation objective. A throw
// or a non-finite objective marks the trial failed.
using PipelineFn = std::function<TrialOutcome(const Assignment& config, std::uint64_t seed)>;

struct TrialRecord {
  std::size_t index = 0;
  Assignment config;
  double objective = 0.0;
  std::size_t epochs_run = 0;
  bool stopped_early = false;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
};

nlohmann::ordered_json trial_to_json(const TrialRecord& trial);

struct HpoResult {
  TrialRecord best;
  std::vector<TrialRecord> trials;
};

// Runs at most `budget` trials (trial i uses seed config.seed + i) and picks
// the best completed one; ties go to the earliest trial. Throws
// kAllTrialsFailed when nothing completes.
HpoResult run_hpo(const SearchSpace& space, const HpoConfig& config, const PipelineFn& pipeline);

using MetricMap = std::map<std::string, double>;
using RetrainFn = std::function<MetricMap(const Assignment& config, std::uint64_t seed)>;

struct RetrainSummary {
  std::vector<MetricMap> reports;
  MetricMap mean;
  MetricMap stddev;  // sample standard deviation; 0 when n == 1
};

// Run i trains and tests with seed base_seed + i.
RetrainSummary final_retrain(const Assignment& best, std::size_t n, std::uint64_t base_seed,
                             const RetrainFn& retrain);

}  // namespace kgemf

#endif  // KGEMF_HPO_HPP_
