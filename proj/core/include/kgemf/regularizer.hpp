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

#ifndef KGEMF_REGULARIZER_HPP_
#define KGEMF_REGULARIZER_HPP_

#include <memory>
#include <span>
#include <string_view>

#include "kgemf/model.hpp"

namespace kgemf {

enum class RegularizerKind { kNoOp, kL1, kL2, kPowerSum };

std::string_view regularizer_kind_name(RegularizerKind kind);
RegularizerKind parse_regularizer_kind(std::string_view name);

struct RegularizerSpec {
  RegularizerKind kind = RegularizerKind::kNoOp;
  double weight = 0.0;  // lambda
  double p = 3.0;       // exponent, PowerSum only
};

// Penalty over a set of parameter rows. Implementations add their gradient
// into `grads` when it is non-null and return the penalty value.
class Regularizer {
 public:
  virtual ~Regularizer() = default;
  virtual std::string_view name() const = 0;
  virtual double apply(const ModelParams& params, std::span<const RowKey> rows,
                       Gradients* grads) const = 0;
};

// Throws kInvalidArgument for a negative weight or a PowerSum exponent < 1.
std::unique_ptr<Regularizer> make_regularizer(const RegularizerSpec& spec);

struct Regularization {
  double penalty = 0.0;
  Gradients gradients;
};

// Penalty and gradient restricted to `rows`; repeated keys count once.
Regularization regularize(const ModelParams& params, std::span<const RowKey> rows,
                          const RegularizerSpec& spec);

}  // namespace kgemf

#endif  // KGEMF_REGULARIZER_HPP_
