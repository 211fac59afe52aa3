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

#ifndef EEGSHIELD_SHIELD_OBJECTIVE_H_
#define EEGSHIELD_SHIELD_OBJECTIVE_H_

#include <span>
#include <string_view>
#include <vector>

#include "eegshield/nets/models.h"
#include "eegshield/numerics/graph.h"
#include "eegshield/numerics/tensor.h"

namespace eegshield::shield {

using numerics::Tensor;
using numerics::Var;

// What the task term compares between perturbed and clean inputs.
enum class TaskMatch { kLogits, kProbabilities };

std::string_view TaskMatchName(TaskMatch match);
TaskMatch ParseTaskMatch(std::string_view name);

// Detached task output of the clean batch: logits, or their softmax.
Tensor CleanTaskTarget(const nets::SurrogateModels& models, const Tensor& clean_batch,
                       TaskMatch match);

// Per-trial objective summed over the batch:
//   sum_i MSE(H_C(x_i + d_i), target_i) + beta * CE(H_D(x_i + d_i), u_i)
// where MSE averages over the K task outputs. Summing keeps the gradient for
// trial i equal to the gradient of its own loss.
Var PerturbationObjectiveSum(const nets::SurrogateModels& models,
                             const nets::BoundModels& bound, Var perturbed,
                             const Tensor& clean_target, std::span<const int> users,
                             double beta, TaskMatch match);

// Per-trial values of the same objective, evaluated without a graph.
std::vector<double> PerTrialObjective(const nets::SurrogateModels& models,
                                      const Tensor& perturbed, const Tensor& clean_target,
                                      std::span<const int> users, double beta,
                                      TaskMatch match);

// Objective of one c x t trial x with perturbation delta and user u.
double PerturbationLoss(const nets::SurrogateModels& models, const Tensor& x,
                        const Tensor& delta, int user, double beta,
                        TaskMatch match = TaskMatch::kLogits);

}  // namespace eegshield::shield

#endif  // EEGSHIELD_SHIELD_OBJECTIVE_H_
