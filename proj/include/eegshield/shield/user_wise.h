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

#ifndef EEGSHIELD_SHIELD_USER_WISE_H_
#define EEGSHIELD_SHIELD_USER_WISE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "eegshield/datakit/dataset.h"
#include "eegshield/datakit/perturbation.h"
#include "eegshield/nets/models.h"
#include "eegshield/nets/optimizer.h"
#include "eegshield/shield/objective.h"

namespace eegshield::shield {

struct UserHyper {
  double alpha = 0.1;
  double beta = 0.1;
  // Weight of the template norm. Unset means 1e-6 / beta.
  std::optional<double> gamma;
  // Standard deviation of the initial templates.
  double init_std = 0.001;
  int m_model = 150;
  int m_perturbation = 150;
  int batch_size = 64;
  int hidden = nets::kDefaultHiddenWidth;
  TaskMatch task_match = TaskMatch::kLogits;
  // Surrogate training.
  nets::OptimizerSettings model_optimizer;
  // Template updates.
  nets::OptimizerSettings template_optimizer;
  std::uint64_t seed = 0;

  double EffectiveGamma() const;
  void Validate() const;
  nlohmann::ordered_json ToJson() const;
};

// Batch mean of MSE(H_C(x + d_u), H_C(x)) + beta * CE(H_D(x + d_u), u) +
// gamma * ||d_u||_2 with templates[U x (c*t)] and x[b x c x t].
Var UserObjective(const nets::SurrogateModels& models, const nets::BoundModels& bound,
                  Var templates, const Tensor& x, const Tensor& clean_target,
                  std::span<const int> users, double beta, double gamma, TaskMatch match);

// Value of UserObjective for templates given as a tensor.
double UserLoss(const nets::SurrogateModels& models, const Tensor& templates,
                const Tensor& x, std::span<const int> users, double beta, double gamma,
                TaskMatch match = TaskMatch::kLogits);

struct UserWiseResult {
  datakit::PerturbationSet perturbation;
  datakit::Dataset perturbed;
  std::vector<double> model_losses;
  std::vector<double> template_losses;
  nets::SurrogateModels models;
};

// Trains surrogates on the clean data for m_model epochs, freezes them and
// fits one template per user for m_perturbation epochs.
UserWiseResult GenerateUserWise(const datakit::Dataset& d,
                                const nets::ExtractorConfig& extractor,
                                const UserHyper& hyper);

// Fits templates with the surrogates held fixed. Only rows whose entry in
// `trainable` is true change; the others are returned bit-identical.
// Per-epoch mean losses go to `epoch_losses` when given.
Tensor FitTemplates(const nets::SurrogateModels& models, const datakit::Dataset& d,
                    Tensor templates, const std::vector<bool>& trainable,
                    const UserHyper& hyper, std::vector<double>* epoch_losses = nullptr);

// Adds templates for users that have none yet. Surrogates are trained on the
// previously released perturbed data together with the new clean data; the
// existing templates stay frozen. User ids in `new_users` must not already
// own a template.
datakit::PerturbationSet ExtendUserWise(const datakit::PerturbationSet& existing,
                                        const datakit::Dataset& released,
                                        const datakit::Dataset& new_users,
                                        const nets::ExtractorConfig& extractor,
                                        const UserHyper& hyper);

}  // namespace eegshield::shield

#endif  // EEGSHIELD_SHIELD_USER_WISE_H_
