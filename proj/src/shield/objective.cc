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

#include "eegshield/shield/objective.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "eegshield/common/error.h"
#include "eegshield/numerics/ops.h"

namespace eegshield::shield {

namespace {

Tensor SoftmaxRows(const Tensor& logits) {
  Tensor out = logits;
  const std::size_t rows = logits.dim(0), cols = logits.dim(1);
  double* p = out.data().data();
  for (std::size_t i = 0; i < rows; ++i) {
    double* row = p + i * cols;
    const double mx = *std::max_element(row, row + cols);
    double total = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      row[j] = std::exp(row[j] - mx);
      total += row[j];
    }
    for (std::size_t j = 0; j < cols; ++j) row[j] /= total;
  }
  return out;
}

void CheckUsers(std::span<const int> users, std::size_t batch, int num_users) {
  Require(users.size() == batch, ErrorCode::kDimension,
          std::to_string(users.size()) + " user labels for a batch of " +
              std::to_string(batch));
  for (int u : users) {
    Require(u >= 0 && u < num_users, ErrorCode::kLabel,
            "user label " + std::to_string(u) + " outside [0, " +
                std::to_string(num_users) + ")");
  }
}

}  // namespace

std::string_view TaskMatchName(TaskMatch match) {
  return match == TaskMatch::kLogits ? "logits" : "probabilities";
}

TaskMatch ParseTaskMatch(std::string_view name) {
  if (name == "logits") return TaskMatch::kLogits;
  if (name == "probabilities") return TaskMatch::kProbabilities;
  Fail(ErrorCode::kParameter, "unknown task match '" + std::string(name) +
                                  "', expected logits or probabilities");
}

Tensor CleanTaskTarget(const nets::SurrogateModels& models, const Tensor& clean_batch,
                       TaskMatch match) {
  Tensor logits = nets::Forward(models, clean_batch).task_logits;
  return match == TaskMatch::kLogits ? logits : SoftmaxRows(logits);
}

Var PerturbationObjectiveSum(const nets::SurrogateModels& models,
                             const nets::BoundModels& bound, Var perturbed,
                             const Tensor& clean_target, std::span<const int> users,
                             double beta, TaskMatch match) {
  const std::size_t batch = perturbed.value().dim(0);
  CheckUsers(users, batch, models.num_users);
  Var feats = nets::Features(models, bound, perturbed);
  Var task = nets::TaskLogits(bound, feats);
  if (match == TaskMatch::kProbabilities) task = numerics::Softmax(task);
  Require(clean_target.shape() == task.value().shape(), ErrorCode::kDimension,
          "clean target " + numerics::ShapeString(clean_target.shape()) +
              " does not match task output " + numerics::ShapeString(task.value().shape()));
  Var target = perturbed.graph->Constant(clean_target);
  const double b = static_cast<double>(batch);
  Var mse = numerics::Scale(numerics::Mse(task, target), b);
  Var ce = numerics::SoftmaxCrossEntropy(nets::UserLogits(bound, feats), users);
  return numerics::Add(mse, numerics::Scale(ce, beta * b));
}

std::vector<double> PerTrialObjective(const nets::SurrogateModels& models,
                                      const Tensor& perturbed, const Tensor& clean_target,
                                      std::span<const int> users, double beta,
                                      TaskMatch match) {
  const std::size_t batch = perturbed.dim(0);
  CheckUsers(users, batch, models.num_users);
  nets::ForwardOutput out = nets::Forward(models, perturbed);
  Tensor task = match == TaskMatch::kLogits ? out.task_logits : SoftmaxRows(out.task_logits);
  Require(clean_target.shape() == task.shape(), ErrorCode::kDimension,
          "clean target does not match task output");
  const std::size_t k = task.dim(1), nu = out.user_logits.dim(1);
  std::vector<double> losses(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    double mse = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double diff = task[i * k + j] - clean_target[i * k + j];
      mse += diff * diff;
    }
    const double* row = out.user_logits.data().data() + i * nu;
    const double mx = *std::max_element(row, row + nu);
    double total = 0.0;
    for (std::size_t j = 0; j < nu; ++j) total += std::exp(row[j] - mx);
    const double ce = mx + std::log(total) - row[users[i]];
    losses[i] = mse / static_cast<double>(k) + beta * ce;
  }
  return losses;
}

double PerturbationLoss(const nets::SurrogateModels& models, const Tensor& x,
                        const Tensor& delta, int user, double beta, TaskMatch match) {
  Require(x.rank() == 2 && x.shape() == delta.shape(), ErrorCode::kDimension,
          "trial " + numerics::ShapeString(x.shape()) + " and delta " +
              numerics::ShapeString(delta.shape()) + " must be matching c x t matrices");
  Tensor clean = x.Reshaped({1, x.dim(0), x.dim(1)});
  Tensor pert = clean;
  for (std::size_t i = 0; i < pert.size(); ++i) pert[i] += delta[i];
  const int users[1] = {user};
  return PerTrialObjective(models, pert, CleanTaskTarget(models, clean, match), users, beta,
                           match)[0];
}

}  // namespace eegshield::shield
