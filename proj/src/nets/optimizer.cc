// Copyright 2026 The EEG Shield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eegshield/nets/optimizer.h"

#include <cmath>
#include <string>

#include "eegshield/common/error.h"

namespace eegshield::nets {

std::string_view OptimizerName(OptimizerKind kind) {
  return kind == OptimizerKind::kSgd ? "sgd" : "adam";
}

OptimizerKind ParseOptimizer(std::string_view name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  Fail(ErrorCode::kParameter, "unknown optimizer '" + std::string(name) + "'");
}

void OptimizerSettings::Validate() const {
  Require(learning_rate > 0.0, ErrorCode::kParameter, "learning rate must be > 0");
  Require(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0,
          ErrorCode::kParameter, "adam betas must lie in [0, 1)");
  Require(epsilon > 0.0, ErrorCode::kParameter, "adam epsilon must be > 0");
}

nlohmann::ordered_json OptimizerSettings::ToJson() const {
  return {{"kind", std::string(OptimizerName(kind))},
          {"learning_rate", learning_rate},
          {"beta1", beta1},
          {"beta2", beta2},
          {"epsilon", epsilon}};
}

Optimizer::Optimizer(OptimizerSettings settings) : settings_(settings) {
  settings_.Validate();
}

void Optimizer::Step(std::span<numerics::Tensor* const> params,
                     std::span<const numerics::Tensor> grads) {
  Require(params.size() == grads.size(), ErrorCode::kDimension,
          "optimizer got " + std::to_string(grads.size()) + " gradients for " +
              std::to_string(params.size()) + " parameters");
  for (std::size_t i = 0; i < params.size(); ++i) {
    Require(params[i]->shape() == grads[i].shape(), ErrorCode::kDimension,
            "gradient shape " + numerics::ShapeString(grads[i].shape()) +
                " does not match parameter " + numerics::ShapeString(params[i]->shape()));
  }
  ++steps_;
  const double lr = settings_.learning_rate;
  if (settings_.kind == OptimizerKind::kSgd) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      auto p = params[i]->data();
      auto g = grads[i].data();
      for (std::size_t j = 0; j < p.size(); ++j) p[j] -= lr * g[j];
    }
    return;
  }

  if (first_moment_.empty()) {
    for (numerics::Tensor* p : params) {
      first_moment_.emplace_back(p->shape());
      second_moment_.emplace_back(p->shape());
    }
  }
  Require(first_moment_.size() == params.size(), ErrorCode::kDimension,
          "parameter list changed between optimizer steps");
  const double b1 = settings_.beta1, b2 = settings_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Require(first_moment_[i].shape() == params[i]->shape(), ErrorCode::kDimension,
            "parameter shape changed between optimizer steps");
    auto p = params[i]->data();
    auto g = grads[i].data();
    auto m = first_moment_[i].data();
    auto v = second_moment_[i].data();
    for (std::size_t j = 0; j < p.size(); ++j) {
      m[j] = b1 * m[j] + (1.0 - b1) * g[j];
      v[j] = b2 * v[j] + (1.0 - b2) * g[j] * g[j];
      const double mhat = m[j] / c1;
      const double vhat = v[j] / c2;
      p[j] -= lr * mhat / (std::sqrt(vhat) + settings_.epsilon);
    }
  }
}

}  // namespace eegshield::nets
