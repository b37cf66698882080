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

#ifndef KGEMF_TOOLS_COMMANDS_HPP_
#define KGEMF_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace kgemf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalidConfig = 2;

struct SplitArgs {
  std::filesystem::path input;
  std::vector<double> ratios{0.8, 0.1, 0.1};
  std::uint64_t seed = 0;
  std::filesystem::path out = ".";
};

struct TrainArgs {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  bool unfiltered = false;
};

struct EvaluateArgs {
  std::filesystem::path checkpoint;
  std::filesystem::path test;
  std::vector<std::filesystem::path> known;
  std::vector<std::size_t> ks{1, 3, 5, 10};
  std::filesystem::path out = ".";
  bool unfiltered = false;
};

struct HpoArgs {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
};

// Each command reports failures on `err` and returns the process exit code.
int cmd_split(const SplitArgs& args, std::ostream& err);
int cmd_train(const TrainArgs& args, std::ostream& err);
int cmd_evaluate(const EvaluateArgs& args, std::ostream& err);
int cmd_hpo(const HpoArgs& args, std::ostream& err);

// Full command line, including argv[0].
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kgemf::cli

#endif  // KGEMF_TOOLS_COMMANDS_HPP_
