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

#include "kgemf/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "kgemf/error.hpp"

namespace kgemf {

std::string_view regularizer_kind_name(RegularizerKind kind) {
  switch (kind) {
    case RegularizerKind::kNoOp: return "NoOp";
    case RegularizerKind::kL1: return "L1";
    case RegularizerKind::kL2: return "L2";
    case RegularizerKind::kPowerSum: return "PowerSum";
  }
  return "NoOp";
}

RegularizerKind parse_regularizer_kind(std::string_view name) {
  for (auto kind : {RegularizerKind::kNoOp, RegularizerKind::kL1, RegularizerKind::kL2,
                    RegularizerKind::kPowerSum}) {
    if (regularizer_kind_name(kind) == name) return kind;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown regularizer '" + std::string(name) + "'");
}

namespace {

std::vector<RowKey> unique_rows(std::span<const RowKey> rows) {
  std::vector<RowKey> out(rows.begin(), rows.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

class NoOpRegularizer final : public Regularizer {
 public:
  std::string_view name() const override { return "NoOp"; }
  double apply(const ModelParams&, std::span<const RowKey>, Gradients*) const override {
    return 0.0;
  }
};

// lambda * sum_x phi(x) over every entry of the selected rows.
class ElementwiseRegularizer : public Regularizer {
 public:
  explicit ElementwiseRegularizer(double weight) : weight_(weight) {}

  double apply(const ModelParams& params, std::span<const RowKey> rows,
               Gradients* grads) const override {
    double penalty = 0.0;
    for (const RowKey& key : unique_rows(rows)) {
      const Table& table = params.table(key.table);
      auto values = table.row(key.row);
      for (double x : values) penalty += value(x);
      if (grads != nullptr && weight_ != 0.0) {
        auto g = grads->row(key, table.width);
        for (std::size_t i = 0; i < values.size(); ++i) g[i] += weight_ * derivative(values[i]);
      }
    }
    return weight_ * penalty;
  }

 protected:
  virtual double value(double x) const = 0;
  virtual double derivative(double x) const = 0;

 private:
  double weight_;
};

double sign(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

class L1Regularizer final : public ElementwiseRegularizer {
 public:
  using ElementwiseRegularizer::ElementwiseRegularizer;
  std::string_view name() const override { return "L1"; }

 protected:
  double value(double x) const override { return std::abs(x); }
  double derivative(double x) const override { return sign(x); }
};

class L2Regularizer final : public ElementwiseRegularizer {
 public:
  using ElementwiseRegularizer::ElementwiseRegularizer;
  std::string_view name() const override { return "L2"; }

 protected:
  double value(double x) const override { return x * x; }
  double derivative(double x) const override { return 2.0 * x; }
};

class PowerSumRegularizer final : public ElementwiseRegularizer {
 public:
  PowerSumRegularizer(double weight, double p) : ElementwiseRegularizer(weight), p_(p) {}
  std::string_view name() const override { return "PowerSum"; }

 protected:
  double value(double x) const override { return std::pow(std::abs(x), p_); }
  double derivative(double x) const override {
    return p_ * std::pow(std::abs(x), p_ - 1.0) * sign(x);
  }

 private:
  double p_;
};

}  // namespace

std::unique_ptr<Regularizer> make_regularizer(const RegularizerSpec& spec) {
  if (!(spec.weight >= 0.0) || !std::isfinite(spec.weight)) {
    throw Error(ErrorCode::kInvalidArgument, "regularizer weight must be finite and >= 0");
  }
  switch (spec.kind) {
    case RegularizerKind::kNoOp: return std::make_unique<NoOpRegularizer>();
    case RegularizerKind::kL1: return std::make_unique<L1Regularizer>(spec.weight);
    case RegularizerKind::kL2: return std::make_unique<L2Regularizer>(spec.weight);
    case RegularizerKind::kPowerSum:
      if (!(spec.p >= 1.0)) {
        throw Error(ErrorCode::kInvalidArgument, "PowerSum exponent must be >= 1");
      }
      return std::make_unique<PowerSumRegularizer>(spec.weight, spec.p);
  }
  return std::make_unique<NoOpRegularizer>();
}

Regularization regularize(const ModelParams& params, std::span<const RowKey> rows,
                          const RegularizerSpec& spec) {
  Regularization out;
  out.penalty = make_regularizer(spec)->apply(params, rows, &out.gradients);
  return out;
}

}  // namespace kgemf
