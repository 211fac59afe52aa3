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

#include "eegshield/nets/models.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "eegshield/common/error.h"
#include "eegshield/common/random.h"

namespace eegshield::nets {

namespace {

constexpr std::size_t kPredictChunk = 128;

Tensor UniformInit(numerics::Shape shape, double fan_in, Rng& rng) {
  Tensor t(std::move(shape));
  const double bound = 1.0 / std::sqrt(fan_in);
  for (double& v : t.data()) v = rng.Uniform(-bound, bound);
  return t;
}

}  // namespace

void ExtractorConfig::Validate(int channels, int samples) const {
  Require(temporal_filters >= 1 && temporal_kernel >= 1 && spatial_filters >= 1 &&
              pool_window >= 1 && pool_stride >= 1,
          ErrorCode::kParameter, "extractor '" + name + "' counts must be >= 1");
  Require(channels >= 1 && samples >= 1, ErrorCode::kDimension,
          "trials must have at least one channel and sample");
  Require(temporal_kernel <= samples, ErrorCode::kDimension,
          "temporal kernel " + std::to_string(temporal_kernel) +
              " longer than trial of " + std::to_string(samples) + " samples");
  Require(pool_window <= FilteredLength(samples), ErrorCode::kDimension,
          "pool window " + std::to_string(pool_window) +
              " longer than filtered length " + std::to_string(FilteredLength(samples)));
}

int ExtractorConfig::FilteredLength(int samples) const {
  return samples - temporal_kernel + 1;
}

int ExtractorConfig::PooledLength(int samples) const {
  return (FilteredLength(samples) - pool_window) / pool_stride + 1;
}

int ExtractorConfig::FeatureDim(int channels, int samples) const {
  Validate(channels, samples);
  return spatial_filters * PooledLength(samples);
}

nlohmann::ordered_json ExtractorConfig::ToJson() const {
  return {{"name", name},
          {"temporal_filters", temporal_filters},
          {"temporal_kernel", temporal_kernel},
          {"spatial_filters", spatial_filters},
          {"activation", std::string(numerics::ActivationName(activation))},
          {"pool_window", pool_window},
          {"pool_stride", pool_stride}};
}

ExtractorConfig ExtractorConfig::FromJson(const nlohmann::ordered_json& j) {
  ExtractorConfig cfg;
  try {
    cfg.name = j.at("name").get<std::string>();
    cfg.temporal_filters = j.at("temporal_filters").get<int>();
    cfg.temporal_kernel = j.at("temporal_kernel").get<int>();
    cfg.spatial_filters = j.at("spatial_filters").get<int>();
    cfg.activation = numerics::ParseActivation(j.at("activation").get<std::string>());
    cfg.pool_window = j.at("pool_window").get<int>();
    cfg.pool_stride = j.at("pool_stride").get<int>();
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kFormat, std::string("bad extractor config: ") + e.what());
  }
  return cfg;
}

ExtractorConfig ExtractorPreset(std::string_view name) {
  if (name == "cfgA") {
    return ExtractorConfig{"cfgA", 8, 13, 8, ActivationKind::kSquare, 8, 4};
  }
  if (name == "cfgB") {
    return ExtractorConfig{"cfgB", 4, 25, 16, ActivationKind::kElu, 16, 8};
  }
  Fail(ErrorCode::kParameter, "unknown extractor preset '" + std::string(name) + "'");
}

SurrogateModels SurrogateModels::Create(const ExtractorConfig& extractor, int channels,
                                        int samples, int num_classes, int num_users,
                                        int hidden, std::uint64_t seed) {
  extractor.Validate(channels, samples);
  Require(num_classes >= 1 && num_users >= 1 && hidden >= 1, ErrorCode::kParameter,
          "class, user and hidden counts must be >= 1");
  SurrogateModels m;
  m.extractor = extractor;
  m.channels = channels;
  m.samples = samples;
  m.num_classes = num_classes;
  m.num_users = num_users;
  m.hidden = hidden;
  const std::size_t f = extractor.temporal_filters;
  const std::size_t k = extractor.temporal_kernel;
  const std::size_t g = extractor.spatial_filters;
  const std::size_t mixed = static_cast<std::size_t>(channels) * f;
  Rng rng(MixSeed(seed, 11));
  m.temporal_kernels = UniformInit({f, 1, k}, static_cast<double>(k), rng);
  m.spatial_mix = UniformInit({g, mixed}, static_cast<double>(mixed), rng);
  m.ResetTaskHead(seed);
  m.ResetUserHead(num_users, seed);
  return m;
}

void SurrogateModels::ResetTaskHead(std::uint64_t seed) {
  const std::size_t d = feature_dim();
  Rng rng(MixSeed(seed, 12));
  task_weight = UniformInit({d, static_cast<std::size_t>(num_classes)}, static_cast<double>(d), rng);
  task_bias = UniformInit({static_cast<std::size_t>(num_classes)}, static_cast<double>(d), rng);
}

void SurrogateModels::ResetUserHead(int users, std::uint64_t seed) {
  Require(users >= 1, ErrorCode::kParameter, "user head needs at least one user");
  num_users = users;
  const std::size_t d = feature_dim();
  const std::size_t h = hidden;
  const std::size_t u = users;
  Rng rng(MixSeed(seed, 13));
  user_weight1 = UniformInit({d, h}, static_cast<double>(d), rng);
  user_bias1 = UniformInit({h}, static_cast<double>(d), rng);
  user_weight2 = UniformInit({h, u}, static_cast<double>(h), rng);
  user_bias2 = UniformInit({u}, static_cast<double>(h), rng);
}

std::vector<Tensor*> SurrogateModels::Parameters() {
  return {&temporal_kernels, &spatial_mix,  &task_weight,  &task_bias,
          &user_weight1,     &user_bias1,   &user_weight2, &user_bias2};
}

std::vector<const Tensor*> SurrogateModels::Parameters() const {
  return {&temporal_kernels, &spatial_mix,  &task_weight,  &task_bias,
          &user_weight1,     &user_bias1,   &user_weight2, &user_bias2};
}

std::vector<Var> BoundModels::All() const {
  return {temporal_kernels, spatial_mix,  task_weight,  task_bias,
          user_weight1,     user_bias1,   user_weight2, user_bias2};
}

BoundModels Bind(Graph& graph, const SurrogateModels& m, unsigned grads) {
  const bool ext = (grads & kExtractorParams) != 0;
  const bool task = (grads & kTaskParams) != 0;
  const bool user = (grads & kUserParams) != 0;
  BoundModels b;
  b.temporal_kernels = graph.Leaf(m.temporal_kernels, ext);
  b.spatial_mix = graph.Leaf(m.spatial_mix, ext);
  b.task_weight = graph.Leaf(m.task_weight, task);
  b.task_bias = graph.Leaf(m.task_bias, task);
  b.user_weight1 = graph.Leaf(m.user_weight1, user);
  b.user_bias1 = graph.Leaf(m.user_bias1, user);
  b.user_weight2 = graph.Leaf(m.user_weight2, user);
  b.user_bias2 = graph.Leaf(m.user_bias2, user);
  return b;
}

Var Features(const SurrogateModels& m, const BoundModels& b, Var x) {
  const Tensor& xv = x.value();
  Require(xv.rank() == 3 && xv.dim(1) == static_cast<std::size_t>(m.channels) &&
              xv.dim(2) == static_cast<std::size_t>(m.samples),
          ErrorCode::kDimension,
          "batch of shape " + numerics::ShapeString(xv.shape()) +
              " does not match model input " + std::to_string(m.channels) + "x" +
              std::to_string(m.samples));
  // Temporal filtering followed by spatial mixing is linear, so the two
  // stages are applied as one multichannel convolution.
  const std::size_t f = m.extractor.temporal_filters, k = m.extractor.temporal_kernel;
  const std::size_t g = m.extractor.spatial_filters, c = m.channels;
  Var mix = numerics::Reshape(b.spatial_mix, {g * c, f});
  Var kern = numerics::Reshape(b.temporal_kernels, {f, k});
  Var h = numerics::Conv1d(x, numerics::Reshape(numerics::MatMul(mix, kern), {g, c, k}));
  h = numerics::Activation(h, m.extractor.activation);
  h = numerics::MeanPoolTime(h, m.extractor.pool_window, m.extractor.pool_stride);
  return numerics::Flatten(h);
}

Var TaskLogits(const BoundModels& b, Var features) {
  return numerics::AddBias(numerics::MatMul(features, b.task_weight), b.task_bias);
}

Var UserLogits(const BoundModels& b, Var features) {
  Var h = numerics::AddBias(numerics::MatMul(features, b.user_weight1), b.user_bias1);
  h = numerics::Activation(h, ActivationKind::kRelu);
  return numerics::AddBias(numerics::MatMul(h, b.user_weight2), b.user_bias2);
}

ForwardOutput Forward(const SurrogateModels& models, const Tensor& batch) {
  Graph graph;
  BoundModels b = Bind(graph, models, kNoParams);
  Var x = graph.Constant(batch);
  Var feats = Features(models, b, x);
  ForwardOutput out;
  out.task_logits = TaskLogits(b, feats).value();
  out.user_logits = UserLogits(b, feats).value();
  out.features = feats.value();
  return out;
}

Tensor BatchTensor(const datakit::Dataset& d, std::span<const std::size_t> indices) {
  Require(!indices.empty(), ErrorCode::kParameter, "empty batch");
  const std::size_t ts = d.trial_size();
  Tensor batch({indices.size(), static_cast<std::size_t>(d.channels),
                static_cast<std::size_t>(d.samples)});
  double* dst = batch.data().data();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    auto t = d.trial(indices[i]);
    std::copy(t.begin(), t.end(), dst + i * ts);
  }
  return batch;
}

std::vector<int> ArgmaxRows(const Tensor& logits) {
  const std::size_t rows = logits.dim(0), cols = logits.dim(1);
  std::vector<int> out(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const double* r = logits.data().data() + i * cols;
    out[i] = static_cast<int>(std::max_element(r, r + cols) - r);
  }
  return out;
}

namespace {

template <typename Fn>
void ForEachChunk(const datakit::Dataset& d, Fn&& fn) {
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < d.size(); start += kPredictChunk) {
    const std::size_t end = std::min(d.size(), start + kPredictChunk);
    idx.resize(end - start);
    std::iota(idx.begin(), idx.end(), start);
    fn(BatchTensor(d, idx));
  }
}

}  // namespace

std::vector<int> PredictTask(const SurrogateModels& models, const datakit::Dataset& d) {
  std::vector<int> preds;
  ForEachChunk(d, [&](const Tensor& batch) {
    Graph graph;
    BoundModels b = Bind(graph, models, kNoParams);
    auto p = ArgmaxRows(TaskLogits(b, Features(models, b, graph.Constant(batch))).value());
    preds.insert(preds.end(), p.begin(), p.end());
  });
  return preds;
}

std::vector<int> PredictUser(const SurrogateModels& models, const datakit::Dataset& d) {
  std::vector<int> preds;
  ForEachChunk(d, [&](const Tensor& batch) {
    Graph graph;
    BoundModels b = Bind(graph, models, kNoParams);
    auto p = ArgmaxRows(UserLogits(b, Features(models, b, graph.Constant(batch))).value());
    preds.insert(preds.end(), p.begin(), p.end());
  });
  return preds;
}

Tensor ExtractAllFeatures(const SurrogateModels& models, const datakit::Dataset& d) {
  Require(!d.empty(), ErrorCode::kParameter, "no trials to extract features from");
  const std::size_t dim = models.feature_dim();
  Tensor out({d.size(), dim});
  std::size_t row = 0;
  ForEachChunk(d, [&](const Tensor& batch) {
    Graph graph;
    BoundModels b = Bind(graph, models, kNoParams);
    const Tensor& f = Features(models, b, graph.Constant(batch)).value();
    std::copy(f.data().begin(), f.data().end(), out.data().begin() + row * dim);
    row += batch.dim(0);
  });
  return out;
}

}  // namespace eegshield::nets
