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

#ifndef EEGSHIELD_SHIELD_SAMPLE_WISE_H_
#define EEGSHIELD_SHIELD_SAMPLE_WISE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "json.hpp"
#include "eegshield/datakit/dataset.h"
#include "eegshield/datakit/perturbation.h"
#include "eegshield/nets/models.h"
#include "eegshield/nets/train.h"
#include "eegshield/shield/objective.h"

namespace eegshield::shield {

struct SampleHyper {
  double alpha = 0.1;
  double beta = 0.1;
  double epsilon = 0.01;
  double eta = 0.002;
  int n_iter = 5;
  // Surrogate epochs per round.
  int L = 5;
  // Perturbation rounds.
  int M = 30;
  std::uint64_t seed = 0;
  TaskMatch task_match = TaskMatch::kLogits;
  // Each round's update continues from the current deltas. When false, every
  // round restarts from the initial random draw.
  bool warm_start = true;
  // Fresh surrogate weights at the start of every round.
  bool reinit_models = false;
  // Batch size, optimizer and hidden width of the surrogates.
  int batch_size = 64;
  int hidden = nets::kDefaultHiddenWidth;
  nets::OptimizerSettings optimizer;
  int threads = 1;

  void Validate() const;
  nlohmann::ordered_json ToJson() const;
};

// n_iter steps of d <- Proj(d - eta * sign(grad)) for a batch x[b x c x t],
// with the gradient taken at x + d. Trials are independent. When `losses` is
// given it receives (n_iter + 1) x b per-trial objective values, one row per
// iterate. `first_trial` only labels error messages.
Tensor PgdUpdate(const nets::SurrogateModels& models, const Tensor& x, const Tensor& delta,
                 std::span<const int> users, const SampleHyper& hyper,
                 std::vector<double>* losses = nullptr, std::size_t first_trial = 0);

struct SampleRound {
  int round = 0;
  std::vector<double> train_losses;
  double objective_start = 0.0;
  double objective_end = 0.0;
  // Fraction of trials whose objective never rose across the inner steps.
  double monotone_fraction = 0.0;
  double max_abs = 0.0;
};

struct SampleWiseResult {
  datakit::PerturbationSet perturbation;
  datakit::Dataset perturbed;
  std::vector<SampleRound> rounds;
  nets::SurrogateModels models;
};

// Called after every round with the deltas in force at the round boundary.
using RoundObserver = std::function<void(const SampleRound&, const datakit::PerturbationSet&)>;

// Alternates L epochs of joint surrogate training on the perturbed data with
// one PgdUpdate pass over every clean trial, for M rounds. Deltas start from
// uniform(-epsilon, epsilon) noise drawn once.
SampleWiseResult GenerateSampleWise(const datakit::Dataset& d,
                                    const nets::ExtractorConfig& extractor,
                                    const SampleHyper& hyper,
                                    const RoundObserver& observer = nullptr);

}  // namespace eegshield::shield

#endif  // EEGSHIELD_SHIELD_SAMPLE_WISE_H_
