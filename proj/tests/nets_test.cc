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

#include <algorithm>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "eegshield/common/random.h"
#include "eegshield/datakit/split.h"
#include "eegshield/datakit/synth.h"
#include "eegshield/nets/checkpoint.h"
#include "eegshield/nets/models.h"
#include "eegshield/nets/optimizer.h"
#include "eegshield/nets/train.h"
#include "eegshield/numerics/ops.h"
#include "expect_error.h"

namespace eegshield::nets {
namespace {

using datakit::Dataset;

datakit::SynthConfig SmallSynth(int trials = 12) {
  datakit::SynthConfig cfg = datakit::ReferenceSynthConfig();
  cfg.trials_per_user_per_session = trials;
  return cfg;
}

TrainConfig FastTrain(int epochs) {
  TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.user_head_epochs = epochs;
  cfg.batch_size = 32;
  cfg.seed = 5;
  return cfg;
}

double Accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

TEST(ExtractorTest, PresetDimensions) {
  const ExtractorConfig a = ExtractorPreset("cfgA");
  EXPECT_EQ(a.FilteredLength(128), 116);
  EXPECT_EQ(a.PooledLength(128), 28);
  EXPECT_EQ(a.FeatureDim(8, 128), 8 * 28);
  const ExtractorConfig b = ExtractorPreset("cfgB");
  EXPECT_EQ(b.FilteredLength(128), 104);
  EXPECT_EQ(b.PooledLength(128), 12);
  EXPECT_EQ(b.FeatureDim(8, 128), 16 * 12);
  EXPECT_ERROR_CODE(ExtractorPreset("cfgC"), ErrorCode::kParameter);
  EXPECT_ERROR_CODE(a.Validate(8, 10), ErrorCode::kDimension);
  EXPECT_EQ(ExtractorConfig::FromJson(b.ToJson()), b);
}

TEST(ModelsTest, ForwardShapes) {
  const Dataset d = datakit::SynthGenerate(SmallSynth(2));
  for (const char* name : {"cfgA", "cfgB"}) {
    const SurrogateModels m = SurrogateModels::Create(ExtractorPreset(name), d.channels,
                                                      d.samples, d.num_classes, d.num_users,
                                                      kDefaultHiddenWidth, 1);
    std::vector<std::size_t> idx(5);
    std::iota(idx.begin(), idx.end(), 0);
    const ForwardOutput out = Forward(m, BatchTensor(d, idx));
    EXPECT_EQ(out.features.shape(), (numerics::Shape{5, static_cast<std::size_t>(m.feature_dim())}));
    EXPECT_EQ(out.task_logits.shape(), (numerics::Shape{5, 2}));
    EXPECT_EQ(out.user_logits.shape(), (numerics::Shape{5, 8}));
  }
}

TEST(ModelsTest, FeaturesMatchTwoStageConvolution) {
  const Dataset d = datakit::SynthGenerate(SmallSynth(2));
  const ExtractorConfig cfg = ExtractorPreset("cfgA");
  const SurrogateModels m =
      SurrogateModels::Create(cfg, d.channels, d.samples, 2, 8, 16, 3);
  const std::vector<std::size_t> idx = {0, 7, 9};
  const Tensor x = BatchTensor(d, idx);
  Graph g;
  Var y = numerics::ConvSpatial(
      numerics::ConvTemporal(g.Constant(x), g.Constant(m.temporal_kernels), 1),
      g.Constant(m.spatial_mix));
  y = numerics::Flatten(numerics::MeanPoolTime(numerics::Activation(y, cfg.activation),
                                               cfg.pool_window, cfg.pool_stride));
  const Tensor fused = Forward(m, x).features;
  ASSERT_EQ(fused.shape(), y.value().shape());
  for (std::size_t i = 0; i < fused.size(); ++i) {
    EXPECT_NEAR(fused[i], y.value()[i], 1e-10 * (1.0 + std::abs(y.value()[i])));
  }
}

TEST(ModelsTest, RowsAreIndependentOfBatchComposition) {
  const Dataset d = datakit::SynthGenerate(SmallSynth(2));
  const SurrogateModels m = SurrogateModels::Create(ExtractorPreset("cfgA"), d.channels,
                                                    d.samples, 2, 8, 16, 3);
  const std::vector<std::size_t> batch = {4, 1, 9};
  const Tensor all = Forward(m, BatchTensor(d, batch)).task_logits;
  for (std::size_t r = 0; r < batch.size(); ++r) {
    const std::vector<std::size_t> one = {batch[r]};
    const Tensor single = Forward(m, BatchTensor(d, one)).task_logits;
    EXPECT_EQ(single[0], all[r * 2]);
    EXPECT_EQ(single[1], all[r * 2 + 1]);
  }
  EXPECT_EQ(Forward(m, BatchTensor(d, batch)).features, Forward(m, BatchTensor(d, batch)).features);
}

TEST(ModelsTest, CreateIsSeededAndChecked) {
  const ExtractorConfig cfg = ExtractorPreset("cfgA");
  EXPECT_EQ(SurrogateModels::Create(cfg, 8, 128, 2, 8, 64, 9),
            SurrogateModels::Create(cfg, 8, 128, 2, 8, 64, 9));
  EXPECT_NE(SurrogateModels::Create(cfg, 8, 128, 2, 8, 64, 9).spatial_mix,
            SurrogateModels::Create(cfg, 8, 128, 2, 8, 64, 10).spatial_mix);
  EXPECT_ERROR_CODE(SurrogateModels::Create(cfg, 8, 128, 0, 8, 64, 9), ErrorCode::kParameter);
  EXPECT_ERROR_CODE(SurrogateModels::Create(cfg, 8, 128, 2, 0, 64, 9), ErrorCode::kParameter);
}

TEST(OptimizerTest, SgdStep) {
  Tensor p({3}, {1.0, -2.0, 0.5});
  const Tensor g({3}, {0.5, 1.0, -4.0});
  Optimizer opt({OptimizerKind::kSgd, 0.1});
  Tensor* params[1] = {&p};
  opt.Step(params, std::span<const Tensor>(&g, 1));
  EXPECT_DOUBLE_EQ(p[0], 0.95);
  EXPECT_DOUBLE_EQ(p[1], -2.1);
  EXPECT_DOUBLE_EQ(p[2], 0.9);
  EXPECT_EQ(opt.step_count(), 1);
}

TEST(OptimizerTest, AdamThreeSteps) {
  Tensor p({1}, {1.0});
  Optimizer opt({OptimizerKind::kAdam, 0.1});
  Tensor* params[1] = {&p};
  const double expected[3] = {0.9000000005, 0.8733662967024315, 0.8393233821389426};
  const double grads[3] = {2.0, -1.0, 0.5};
  for (int t = 0; t < 3; ++t) {
    const Tensor g({1}, {grads[t]});
    opt.Step(params, std::span<const Tensor>(&g, 1));
    EXPECT_NEAR(p[0], expected[t], 1e-15);
  }
}

TEST(OptimizerTest, RejectsBadInput) {
  EXPECT_ERROR_CODE(Optimizer({OptimizerKind::kSgd, 0.0}), ErrorCode::kParameter);
  EXPECT_ERROR_CODE(ParseOptimizer("rmsprop"), ErrorCode::kParameter);
  Tensor p({2});
  const Tensor g({3});
  Optimizer opt({OptimizerKind::kAdam, 0.1});
  Tensor* params[1] = {&p};
  EXPECT_ERROR_CODE(opt.Step(params, std::span<const Tensor>(&g, 1)), ErrorCode::kDimension);
}

TEST(TrainTest, ZeroAlphaJointMatchesTaskOnly) {
  const Dataset d = datakit::SynthGenerate(SmallSynth(4));
  TrainConfig cfg = FastTrain(3);
  cfg.alpha = 0.0;
  const SurrogateModels init = SurrogateModels::Create(ExtractorPreset("cfgA"), d.channels,
                                                       d.samples, 2, 8, 16, 1);
  JointTrainer joint(init, cfg, Objective::kJoint);
  JointTrainer task(init, cfg, Objective::kTaskOnly);
  for (int e = 0; e < 3; ++e) {
    EXPECT_EQ(joint.RunEpoch(d), task.RunEpoch(d));
  }
  const auto a = joint.models().Parameters();
  const auto b = task.models().Parameters();
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(*a[i], *b[i]) << "parameter " << i;
}

TEST(TrainTest, TaskOnlyLeavesUserHeadUntouched) {
  const Dataset d = datakit::SynthGenerate(SmallSynth(4));
  const SurrogateModels init = SurrogateModels::Create(ExtractorPreset("cfgA"), d.channels,
                                                       d.samples, 2, 8, 16, 1);
  JointTrainer task(init, FastTrain(2), Objective::kTaskOnly);
  task.RunEpoch(d);
  const auto a = init.Parameters();
  const auto b = task.models().Parameters();
  EXPECT_NE(*a[0], *b[0]);
  for (std::size_t i = 4; i < a.size(); ++i) EXPECT_EQ(*a[i], *b[i]);
}

TEST(TrainTest, LossDecreasesOverWindows) {
  const Dataset d = datakit::SynthGenerate(SmallSynth(8));
  std::vector<double> losses;
  TrainJoint(d, FastTrain(40),
             SurrogateModels::Create(ExtractorPreset("cfgA"), d.channels, d.samples, 2, 8, 64, 2),
             &losses);
  ASSERT_EQ(losses.size(), 40u);
  double previous = 1e300;
  for (std::size_t w = 0; w < 4; ++w) {
    const double mean = std::accumulate(losses.begin() + w * 10, losses.begin() + w * 10 + 10, 0.0) / 10;
    EXPECT_LE(mean, previous);
    previous = mean;
  }
  EXPECT_LT(losses.back(), 0.5 * losses.front());
}

TEST(TrainTest, ChecksDataset) {
  const Dataset d = datakit::SynthGenerate(SmallSynth(2));
  SurrogateModels m = SurrogateModels::Create(ExtractorPreset("cfgA"), d.channels, d.samples + 4,
                                              2, 8, 16, 1);
  JointTrainer t(m, FastTrain(1));
  EXPECT_ERROR_CODE(t.RunEpoch(d), ErrorCode::kDimension);
  TrainConfig bad = FastTrain(1);
  bad.batch_size = 0;
  EXPECT_ERROR_CODE(bad.Validate(), ErrorCode::kParameter);
}

// Two-stage training on one session, user accuracy measured on the others.
double HeldOutUserAccuracy(Dataset d) {
  const datakit::LosoSplit split = datakit::SplitLoso(d, 0);
  const TwoStageResult r = TrainTwoStage(split.train, FastTrain(40), ExtractorPreset("cfgA"));
  return Accuracy(PredictUser(r.models, split.test), split.test.user_labels);
}

TEST(TrainTest, TwoStageRecognizesUsers) {
  const Dataset d = datakit::SynthGenerate(SmallSynth(20));
  EXPECT_GE(HeldOutUserAccuracy(d), 4.0 / 8.0);
}

TEST(TrainTest, ShuffledUserLabelsGiveChance) {
  Dataset d = datakit::SynthGenerate(SmallSynth(20));
  Rng rng(4);
  rng.Shuffle(std::span<int>(d.user_labels));
  EXPECT_LE(HeldOutUserAccuracy(d), 0.25);
}

TEST(TrainTest, ObserverSeesBothStages) {
  const Dataset d = datakit::SynthGenerate(SmallSynth(2));
  std::vector<int> stages;
  TrainTwoStage(d, FastTrain(3), ExtractorPreset("cfgA"), &d,
                [&](const EpochPredictions& ep) {
                  stages.push_back(ep.stage);
                  EXPECT_EQ(ep.train.size(), d.size());
                  EXPECT_EQ(ep.monitor.size(), d.size());
                });
  EXPECT_EQ(stages, (std::vector<int>{1, 1, 1, 2, 2, 2}));
}

TEST(CheckpointTest, RoundTrip) {
  SurrogateModels m = SurrogateModels::Create(ExtractorPreset("cfgB"), 8, 128, 2, 8, 64, 4);
  const SurrogateModels back = DecodeCheckpoint(EncodeCheckpoint(m));
  const auto a = m.Parameters();
  const auto b = back.Parameters();
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i]->shape(), b[i]->shape());
    for (std::size_t j = 0; j < a[i]->size(); ++j) {
      EXPECT_EQ((*b[i])[j], static_cast<double>(static_cast<float>((*a[i])[j])));
    }
  }
  EXPECT_EQ(back.extractor, m.extractor);
  EXPECT_EQ(DecodeCheckpoint(EncodeCheckpoint(back)), back);

  auto bytes = EncodeCheckpoint(m);
  bytes[1] = 'x';
  EXPECT_ERROR_CODE(DecodeCheckpoint(bytes), ErrorCode::kFormat);
  bytes = EncodeCheckpoint(m);
  bytes.resize(bytes.size() - 3);
  EXPECT_ERROR_CODE(DecodeCheckpoint(bytes), ErrorCode::kCorruption);
}

}  // namespace
}  // namespace eegshield::nets
