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

#include "kgemf/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "kgemf/error.hpp"

namespace kgemf {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'K', 'G', 'E', 'M', 'F', 'C', 'K', '\0'};
constexpr std::uint32_t kMaxStringBytes = 1u << 20;

void check_vocabulary(const ModelParams& params, const Vocabulary& vocabulary, ErrorCode code) {
  if (vocabulary.num_entities() != params.num_entities() ||
      vocabulary.num_relations() != params.num_relations_base()) {
    throw Error(code, "vocabulary has " + std::to_string(vocabulary.num_entities()) +
                          " entities / " + std::to_string(vocabulary.num_relations()) +
                          " relations but the model expects " +
                          std::to_string(params.num_entities()) + " / " +
                          std::to_string(params.num_relations_base()));
  }
}

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw Error(ErrorCode::kCorruptCheckpoint, "unexpected end of checkpoint");
  }
  return value;
}

std::string get_string(std::istream& in) {
  const auto n = get<std::uint32_t>(in);
  if (n > kMaxStringBytes) throw Error(ErrorCode::kCorruptCheckpoint, "implausible string length");
  std::string s(n, '\0');
  if (n > 0 && !in.read(s.data(), n)) {
    throw Error(ErrorCode::kCorruptCheckpoint, "unexpected end of checkpoint");
  }
  return s;
}

}  // namespace

void write_checkpoint(std::ostream& out, const ModelParams& params,
                      const Vocabulary& vocabulary) {
  check_vocabulary(params, vocabulary, ErrorCode::kInvalidArgument);
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put_string(out, params.kind());
  put<std::uint64_t>(out, params.dim());
  put<std::uint64_t>(out, params.num_entities());
  put<std::uint64_t>(out, params.num_relations_base());
  put<std::uint8_t>(out, params.inverse_relations() ? 1 : 0);
  put<std::int32_t>(out, params.p_norm());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.tables().size()));
  for (const Table& t : params.tables()) {
    put_string(out, t.name);
    put<std::uint8_t>(out, t.role == TableRole::kEntity ? 0 : 1);
    put<std::uint64_t>(out, t.rows);
    put<std::uint64_t>(out, t.width);
    out.write(reinterpret_cast<const char*>(t.values.data()),
              static_cast<std::streamsize>(t.values.size() * sizeof(double)));
  }
  put<std::uint64_t>(out, vocabulary.num_entities());
  for (const auto& label : vocabulary.entity_labels()) put_string(out, label);
  put<std::uint64_t>(out, vocabulary.num_relations());
  for (const auto& label : vocabulary.relation_labels()) put_string(out, label);
  if (!out) throw Error(ErrorCode::kIo, "failed writing checkpoint");
}

Checkpoint read_checkpoint(std::istream& in) {
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorCode::kCorruptCheckpoint, "bad magic");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::kCorruptCheckpoint,
                "unsupported checkpoint version " + std::to_string(version));
  }
  ModelOptions options;
  options.kind = get_string(in);
  options.dim = get<std::uint64_t>(in);
  options.num_entities = get<std::uint64_t>(in);
  options.num_relations = get<std::uint64_t>(in);
  options.inverse_relations = get<std::uint8_t>(in) != 0;
  options.p_norm = get<std::int32_t>(in);
  Checkpoint ckpt;
  try {
    ckpt.params = ModelParams(options);
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorruptCheckpoint, std::string("bad model header: ") + e.what());
  }

  const auto num_tables = get<std::uint32_t>(in);
  if (num_tables != ckpt.params.tables().size()) {
    throw Error(ErrorCode::kCorruptCheckpoint, "table count mismatch");
  }
  for (Table& t : ckpt.params.tables()) {
    const std::string name = get_string(in);
    const auto role = get<std::uint8_t>(in);
    const auto rows = get<std::uint64_t>(in);
    const auto width = get<std::uint64_t>(in);
    const std::uint8_t expected_role = t.role == TableRole::kEntity ? 0 : 1;
    if (name != t.name || role != expected_role || rows != t.rows || width != t.width) {
      throw Error(ErrorCode::kCorruptCheckpoint, "table '" + name + "' has unexpected shape");
    }
    const auto bytes = static_cast<std::streamsize>(t.values.size() * sizeof(double));
    if (bytes > 0 && !in.read(reinterpret_cast<char*>(t.values.data()), bytes)) {
      throw Error(ErrorCode::kCorruptCheckpoint, "truncated table '" + name + "'");
    }
  }
  const auto num_entities = get<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < num_entities; ++i) ckpt.vocabulary.add_entity(get_string(in));
  const auto num_relations = get<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < num_relations; ++i) ckpt.vocabulary.add_relation(get_string(in));
  check_vocabulary(ckpt.params, ckpt.vocabulary, ErrorCode::kCorruptCheckpoint);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::kCorruptCheckpoint, "trailing bytes after checkpoint");
  }
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params,
                     const Vocabulary& vocabulary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  write_checkpoint(out, params, vocabulary);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  return read_checkpoint(in);
}

}  // namespace kgemf
