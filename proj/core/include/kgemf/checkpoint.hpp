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

#ifndef KGEMF_CHECKPOINT_HPP_
#define KGEMF_CHECKPOINT_HPP_

#include <filesystem>
#include <iosfwd>

#include "kgemf/graph.hpp"
#include "kgemf/model.hpp"

namespace kgemf {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  ModelParams params;
  Vocabulary vocabulary;
};

// Binary container, little-endian:
//   magic "KGEMFCK\0" | u32 version | str kind | u64 dim | u64 entities |
//   u64 base relations | u8 inverse flag | i32 p_norm | u32 table count |
//   per table: str name, u8 role, u64 rows, u64 width, f64[rows*width] |
//   u64 n, str[n] entity labels | u64 m, str[m] relation labels
// where str is a u32 byte length followed by the bytes. Doubles are stored
// bit-for-bit, so a save/load cycle reproduces the parameters exactly.
void write_checkpoint(std::ostream& out, const ModelParams& params, const Vocabulary& vocabulary);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params,
                     const Vocabulary& vocabulary);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace kgemf

#endif  // KGEMF_CHECKPOINT_HPP_
