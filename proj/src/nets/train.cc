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

#include "eegshield/nets/train.h"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "eegshield/common/error.h"
#include "eegshield/common/random.h"

namespace eegshield::nets {

namespace {

void CheckTrainable(const datakit::Dataset& d, const SurrogateModels& m) {
  Require(!d.empty(), ErrorCode::kParameter, "training dataset is empty");
  Require(d.channels == m.channels && d.samples == m.samples, ErrorCode::kDimension,
          "dataset trials do not match the model input shape");
}

template <typename T>
std::vector<T> Gather(std::span<const T> values, std::span<const std::size_t> idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(values[i]);
  return out;
}

// Adam or sgd over the head-only features [N x D] of stage 2.
std::vector<double> FitUserHead(SurrogateModels& models, const Tensor& features,
                                std::span<const int> users, const TrainConfig& cfg,
                                const Tensor* monitor_features,
                                const EpochObserver& observer) {
  const std::size_t n = features.dim(0), dim = features.dim(1);
  Optimizer optimizer(cfg.optimizer);
  std::vector<double> losses;
  std::vector<std::size_t> order(n);
  for (int epoch = 0; epoch < cfg.user_head_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng rng(MixSeed(cfg.seed, 200000 + static_cast<std::uint64_t>(epoch)));
    rng.Shuffle(std::span<std::size_t>(order));
    double total = 0.0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t end = std::min(n, start + static_cast<std::size_t>(cfg.batch_size));
      std::span<const std::size_t> idx(order.data() + start, end - start);
      Tensor batch({idx.size(), dim});
      for (std::size_t i = 0; i < idx.size(); ++i) {
        std::copy_n(features.data().data() + idx[i] * dim, dim,
                    batch.data().data() + i * dim);
      }
      const std::vector<int> labels = Gather(users, idx);
      Graph graph;
      BoundModels b = Bind(graph, models, kUserParams);
      Var loss = numerics::SoftmaxCrossEntropy(UserLogits(b, graph.Constant(std::move(batch))),
                                               labels);
      std::vector<Var> wrt = {b.user_weight1, b.user_bias1, b.user_weight2, b.user_bias2};
      std::vector<Tensor> grads = graph.Grad(loss, wrt);
      std::vector<Tensor*> params = {&models.user_weight1, &models.user_bias1,
                                     &models.user_weight2, &models.user_bias2};
      optimizer.Step(params, grads);
      total += loss.value().item() * static_cast<double>(idx.size());
    }
    losses.push_back(total / static_cast<double>(n));
    if (observer) {
      EpochPredictions ep;
      ep.stage = 2;
      ep.epoch = epoch;
      auto predict = [&](const Tensor& f) {
        Graph graph;
        BoundModels b = Bind(graph, models, kNoParams);
        return ArgmaxRows(UserLogits(b, graph.Constant(f)).value());
      };
      ep.train = predict(features);
      if (monitor_features != nullptr) ep.monitor = predict(*monitor_features);
      observer(ep);
    }
  }
  return losses;
}

}  // namespace

void TrainConfig::Validate() const {
  Require(alpha >= 0.0, ErrorCode::kParameter, "alpha must be >= 0");
  Require(batch_size >= 1, ErrorCode::kParameter, "batch size must be >= 1");
  Require(epochs >= 0 && user_head_epochs >= 0, ErrorCode::kParameter,
          "epoch counts must be >= 0");
  Require(hidden >= 1, ErrorCode::kParameter, "hidden width must be >= 1");
  optimizer.Validate();
}

nlohmann::ordered_json TrainConfig::ToJson() const {
  return {{"alpha", alpha},
          {"batch_size", batch_size},
          {"epochs", epochs},
          {"user_head_epochs", user_head_epochs},
          {"hidden", hidden},
          {"seed", seed},
          {"optimizer", optimizer.ToJson()}};
}

LossAndGrads ObjectiveLossAndGrads(const SurrogateModels& models, const Tensor& batch,
                                   std::span<const int> task_labels,
                                   std::span<const int> user_labels, double alpha,
                                   Objective objective) {
  Graph graph;
  const unsigned groups =
      objective == Objective::kJoint ? kAllParams : (kExtractorParams | kTaskParams);
  BoundModels b = Bind(graph, models, groups);
  Var feats = Features(models, b, graph.Constant(batch));
  Var loss = numerics::SoftmaxCrossEntropy(TaskLogits(b, feats), task_labels);
  if (objective == Objective::kJoint) {
    Var user = numerics::SoftmaxCrossEntropy(UserLogits(b, feats), user_labels);
    loss = numerics::Add(loss, numerics::Scale(user, alpha));
  }
  std::vector<Var> all = b.All();
  std::vector<Var> wrt;
  for (const Var& v : all) {
    if (graph.requires_grad(v)) wrt.push_back(v);
  }
  std::vector<Tensor> grads = graph.Grad(loss, wrt);
  LossAndGrads out;
  out.loss = loss.value().item();
  std::size_t next = 0;
  for (const Var& v : all) {
    if (graph.requires_grad(v)) {
      out.grads.push_back(std::move(grads[next++]));
    } else {
      out.grads.emplace_back(v.value().shape());
    }
  }
  return out;
}

JointTrainer::JointTrainer(SurrogateModels models, TrainConfig cfg, Objective objective)
    : models_(std::move(models)),
      cfg_(std::move(cfg)),
      objective_(objective),
      optimizer_(cfg_.optimizer) {
  cfg_.Validate();
}

double JointTrainer::RunEpoch(const datakit::Dataset& d) {
  CheckTrainable(d, models_);
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(MixSeed(cfg_.seed, 100000 + static_cast<std::uint64_t>(epoch_)));
  rng.Shuffle(std::span<std::size_t>(order));

  std::vector<Tensor*> params;
  {
    auto all = models_.Parameters();
    const std::size_t count = objective_ == Objective::kJoint ? all.size() : 4;
    params.assign(all.begin(), all.begin() + count);
  }

  double total = 0.0;
  try {
    for (std::size_t start = 0; start < n; start += cfg_.batch_size) {
      const std::size_t end = std::min(n, start + static_cast<std::size_t>(cfg_.batch_size));
      std::span<const std::size_t> idx(order.data() + start, end - start);
      const std::vector<int> y = Gather<int>(d.task_labels, idx);
      const std::vector<int> u = Gather<int>(d.user_labels, idx);
      LossAndGrads lg = ObjectiveLossAndGrads(models_, BatchTensor(d, idx), y, u,
                                              cfg_.alpha, objective_);
      if (!std::isfinite(lg.loss)) Fail(ErrorCode::kNumerical, "non-finite loss");
      lg.grads.resize(params.size());
      optimizer_.Step(params, lg.grads);
      total += lg.loss * static_cast<double>(idx.size());
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNumerical) throw;
    Fail(ErrorCode::kNumerical,
         "training diverged in epoch " + std::to_string(epoch_) + ": " + e.what());
  }
  ++epoch_;
  return total / static_cast<double>(n);
}

SurrogateModels TrainJoint(const datakit::Dataset& d, const TrainConfig& cfg,
                           SurrogateModels models, std::vector<double>* epoch_losses) {
  JointTrainer trainer(std::move(models), cfg, Objective::kJoint);
  for (int e = 0; e < cfg.epochs; ++e) {
    const double loss = trainer.RunEpoch(d);
    if (epoch_losses != nullptr) epoch_losses->push_back(loss);
  }
  return trainer.TakeModels();
}

TwoStageResult TrainTwoStage(const datakit::Dataset& train, const TrainConfig& cfg,
                             const ExtractorConfig& extractor,
                             const datakit::Dataset* monitor,
                             const EpochObserver& observer) {
  cfg.Validate();
  Require(!train.empty(), ErrorCode::kParameter, "training dataset is empty");
  SurrogateModels init = SurrogateModels::Create(extractor, train.channels, train.samples,
                                                 train.num_classes, train.num_users,
                                                 cfg.hidden, cfg.seed);
  TwoStageResult result;
  JointTrainer stage1(std::move(init), cfg, Objective::kTaskOnly);
  for (int e = 0; e < cfg.epochs; ++e) {
    result.stage1_losses.push_back(stage1.RunEpoch(train));
    if (observer) {
      EpochPredictions ep;
      ep.stage = 1;
      ep.epoch = e;
      ep.train = PredictTask(stage1.models(), train);
      if (monitor != nullptr) ep.monitor = PredictTask(stage1.models(), *monitor);
      observer(ep);
    }
  }
  result.models = stage1.TakeModels();
  result.models.ResetUserHead(train.num_users, MixSeed(cfg.seed, 77));

  const Tensor features = ExtractAllFeatures(result.models, train);
  Tensor monitor_features;
  if (observer && monitor != nullptr && !monitor->empty()) {
    monitor_features = ExtractAllFeatures(result.models, *monitor);
  }
  result.stage2_losses =
      FitUserHead(result.models, features, train.user_labels, cfg,
                  monitor_features.size() > 0 ? &monitor_features : nullptr, observer);
  return result;
}

}  // namespace eegshield::nets
