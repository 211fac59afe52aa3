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

#ifndef EEGSHIELD_NETS_MODELS_H_
#define EEGSHIELD_NETS_MODELS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "eegshield/datakit/dataset.h"
#include "eegshield/numerics/graph.h"
#include "eegshield/numerics/ops.h"
#include "eegshield/numerics/tensor.h"

namespace eegshield::nets {

using numerics::ActivationKind;
using numerics::Graph;
using numerics::Tensor;
using numerics::Var;

// Shallow convolutional feature extractor: temporal filter bank applied to
// every channel, spatial mixing across (channel, filter) maps, a pointwise
// nonlinearity, temporal mean pooling, flatten.
struct ExtractorConfig {
  std::string name = "custom";
  int temporal_filters = 8;
  int temporal_kernel = 13;
  int spatial_filters = 8;
  ActivationKind activation = ActivationKind::kSquare;
  int pool_window = 8;
  int pool_stride = 4;

  // DimensionError when the config cannot run on channels x samples trials.
  void Validate(int channels, int samples) const;
  int FilteredLength(int samples) const;
  int PooledLength(int samples) const;
  int FeatureDim(int channels, int samples) const;

  nlohmann::ordered_json ToJson() const;
  static ExtractorConfig FromJson(const nlohmann::ordered_json& j);

  bool operator==(const ExtractorConfig&) const = default;
};

// "cfgA": 8 temporal filters of 13 samples, 8 spatial filters, square,
// pool 8 / stride 4. "cfgB": 4 filters of 25 samples, 16 spatial filters,
// elu, pool 16 / stride 8.
ExtractorConfig ExtractorPreset(std::string_view name);

inline constexpr int kDefaultHiddenWidth = 64;

// Shared extractor F', one-layer task head C' and two-layer user head D'
// (affine, relu, affine).
struct SurrogateModels {
  ExtractorConfig extractor;
  int channels = 0;
  int samples = 0;
  int num_classes = 0;
  int num_users = 0;
  int hidden = kDefaultHiddenWidth;

  Tensor temporal_kernels;  // f x 1 x k
  Tensor spatial_mix;       // g x (c * f)
  Tensor task_weight;       // D x K
  Tensor task_bias;         // K
  Tensor user_weight1;      // D x h
  Tensor user_bias1;        // h
  Tensor user_weight2;      // h x U
  Tensor user_bias2;        // U

  // Weights drawn from uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)).
  static SurrogateModels Create(const ExtractorConfig& extractor, int channels,
                                int samples, int num_classes, int num_users,
                                int hidden, std::uint64_t seed);

  int feature_dim() const { return extractor.FeatureDim(channels, samples); }

  // Declaration order: extractor, task head, user head. Checkpoints and
  // optimizer state follow this order.
  std::vector<Tensor*> Parameters();
  std::vector<const Tensor*> Parameters() const;

  void ResetTaskHead(std::uint64_t seed);
  // Fresh user head for `num_users` users; extractor and task head are kept.
  void ResetUserHead(int num_users, std::uint64_t seed);

  bool operator==(const SurrogateModels&) const = default;
};

// Which parameter groups become differentiable leaves when bound to a graph.
enum ParamGroup : unsigned {
  kNoParams = 0,
  kExtractorParams = 1,
  kTaskParams = 2,
  kUserParams = 4,
  kAllParams = 7,
};

struct BoundModels {
  Var temporal_kernels, spatial_mix;
  Var task_weight, task_bias;
  Var user_weight1, user_bias1, user_weight2, user_bias2;

  // Variables in SurrogateModels::Parameters() order.
  std::vector<Var> All() const;
};

BoundModels Bind(Graph& graph, const SurrogateModels& models, unsigned grads);

// F'(x) for x[b x c x t] -> [b x feature_dim].
Var Features(const SurrogateModels& models, const BoundModels& bound, Var x);
Var TaskLogits(const BoundModels& bound, Var features);
Var UserLogits(const BoundModels& bound, Var features);

struct ForwardOutput {
  Tensor task_logits;  // b x K
  Tensor user_logits;  // b x U
  Tensor features;     // b x feature_dim
};

// Both heads consume the same features.
ForwardOutput Forward(const SurrogateModels& models, const Tensor& batch);

// Copies the listed trials into a [b x c x t] tensor.
Tensor BatchTensor(const datakit::Dataset& d, std::span<const std::size_t> indices);

// Argmax predictions over a whole dataset, evaluated in chunks.
std::vector<int> PredictTask(const SurrogateModels& models, const datakit::Dataset& d);
std::vector<int> PredictUser(const SurrogateModels& models, const datakit::Dataset& d);

// F' applied to every trial: [N x feature_dim].
Tensor ExtractAllFeatures(const SurrogateModels& models, const datakit::Dataset& d);

std::vector<int> ArgmaxRows(const Tensor& logits);

}  // namespace eegshield::nets

#endif  // EEGSHIELD_NETS_MODELS_H_
