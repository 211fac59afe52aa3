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

#ifndef EEGSHIELD_NETS_TRAIN_H_
#define EEGSHIELD_NETS_TRAIN_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "json.hpp"
#include "eegshield/datakit/dataset.h"
#include "eegshield/nets/models.h"
#include "eegshield/nets/optimizer.h"

namespace eegshield::nets {

struct TrainConfig {
  // Weight of the user cross-entropy in the joint objective.
  double alpha = 0.1;
  int batch_size = 64;
  // Joint training epochs, or stage-1 epochs of two-stage training.
  int epochs = 150;
  // Stage-2 epochs of two-stage training.
  int user_head_epochs = 150;
  int hidden = kDefaultHiddenWidth;
  std::uint64_t seed = 0;
  OptimizerSettings optimizer;

  void Validate() const;
  nlohmann::ordered_json ToJson() const;
};

enum class Objective {
  // CE(task) + alpha * CE(user), all parameters trained.
  kJoint,
  // CE(task) only; extractor and task head trained, user head untouched.
  kTaskOnly,
};

struct LossAndGrads {
  double loss = 0.0;
  // In SurrogateModels::Parameters() order; untrained groups get zeros.
  std::vector<Tensor> grads;
};

LossAndGrads ObjectiveLossAndGrads(const SurrogateModels& models, const Tensor& batch,
                                   std::span<const int> task_labels,
                                   std::span<const int> user_labels, double alpha,
                                   Objective objective);

// Mini-batch trainer whose optimizer state persists across epochs, so
// training can be interleaved with other work.
class JointTrainer {
 public:
  JointTrainer(SurrogateModels models, TrainConfig cfg, Objective objective = Objective::kJoint);

  // One pass over `d` in a seeded shuffled order. Returns the mean loss.
  // Non-finite values raise a numerical-failure error naming the epoch.
  double RunEpoch(const datakit::Dataset& d);

  const SurrogateModels& models() const { return models_; }
  SurrogateModels& mutable_models() { return models_; }
  SurrogateModels TakeModels() { return std::move(models_); }
  int epochs_run() const { return epoch_; }

 private:
  SurrogateModels models_;
  TrainConfig cfg_;
  Objective objective_;
  Optimizer optimizer_;
  int epoch_ = 0;
};

// cfg.epochs joint epochs. Per-epoch mean losses go to `epoch_losses` when
// given.
SurrogateModels TrainJoint(const datakit::Dataset& d, const TrainConfig& cfg,
                           SurrogateModels models,
                           std::vector<double>* epoch_losses = nullptr);

struct EpochPredictions {
  // 1: task head during stage 1; 2: user head during stage 2.
  int stage = 1;
  int epoch = 0;
  std::vector<int> train;
  std::vector<int> monitor;
};

using EpochObserver = std::function<void(const EpochPredictions&)>;

struct TwoStageResult {
  SurrogateModels models;
  std::vector<double> stage1_losses;
  std::vector<double> stage2_losses;
};

// Stage 1 trains F and C on task labels only. Stage 2 freezes F and fits a
// fresh user head on its features. When an observer is given, it receives
// train and monitor predictions after every epoch of both stages.
TwoStageResult TrainTwoStage(const datakit::Dataset& train, const TrainConfig& cfg,
                             const ExtractorConfig& extractor,
                             const datakit::Dataset* monitor = nullptr,
                             const EpochObserver& observer = nullptr);

}  // namespace eegshield::nets

#endif  // EEGSHIELD_NETS_TRAIN_H_
