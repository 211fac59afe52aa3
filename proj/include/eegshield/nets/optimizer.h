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

#ifndef EEGSHIELD_NETS_OPTIMIZER_H_
#define EEGSHIELD_NETS_OPTIMIZER_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "eegshield/numerics/tensor.h"

namespace eegshield::nets {

enum class OptimizerKind { kSgd, kAdam };

std::string_view OptimizerName(OptimizerKind kind);
OptimizerKind ParseOptimizer(std::string_view name);

struct OptimizerSettings {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void Validate() const;
  nlohmann::ordered_json ToJson() const;
};

// First-order optimizer over an ordered parameter list. Adam moments are
// created on the first step and must keep the parameter shapes afterwards.
class Optimizer {
 public:
  explicit Optimizer(OptimizerSettings settings);

  // sgd: p -= lr * g. adam: bias-corrected moment update.
  void Step(std::span<numerics::Tensor* const> params,
            std::span<const numerics::Tensor> grads);

  std::int64_t step_count() const { return steps_; }
  const OptimizerSettings& settings() const { return settings_; }

 private:
  OptimizerSettings settings_;
  std::int64_t steps_ = 0;
  std::vector<numerics::Tensor> first_moment_;
  std::vector<numerics::Tensor> second_moment_;
};

}  // namespace eegshield::nets

#endif  // EEGSHIELD_NETS_OPTIMIZER_H_
