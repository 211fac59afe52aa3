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

#include "eegshield/shield/user_wise.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "eegshield/common/error.h"
#include "eegshield/common/random.h"
#include "eegshield/nets/train.h"
#include "eegshield/numerics/ops.h"

namespace eegshield::shield {

namespace {

using datakit::Dataset;
using datakit::PerturbationSet;

Tensor InitialTemplates(std::size_t users, std::size_t trial_size, double std_dev,
                        std::uint64_t seed) {
  Tensor t({users, trial_size});
  Rng rng(seed);
  for (double& v : t.data()) v = rng.Normal(0.0, std_dev);
  return t;
}

nets::TrainConfig SurrogateTraining(const UserHyper& hyper) {
  nets::TrainConfig tc;
  tc.alpha = hyper.alpha;
  tc.batch_size = hyper.batch_size;
  tc.epochs = hyper.m_model;
  tc.hidden = hyper.hidden;
  tc.seed = MixSeed(hyper.seed, 22);
  tc.optimizer = hyper.model_optimizer;
  return tc;
}

PerturbationSet ToSet(const Tensor& templates, const Dataset& d) {
  PerturbationSet p;
  p.mode = datakit::PerturbationMode::kUserWise;
  p.channels = d.channels;
  p.samples = d.samples;
  p.epsilon = 0.0;
  p.deltas.reserve(templates.size());
  for (double v : templates.data()) p.deltas.push_back(datakit::RoundTowardZeroF32(v));
  return p;
}

nlohmann::ordered_json Provenance(const char* generator,
                                  const nets::ExtractorConfig& extractor,
                                  const UserHyper& hyper, const std::vector<double>& model_losses,
                                  const std::vector<double>& template_losses,
                                  const PerturbationSet& p) {
  return {{"generator", generator},
          {"extractor", extractor.ToJson()},
          {"hyper", hyper.ToJson()},
          {"model_losses", model_losses},
          {"template_losses", template_losses},
          {"template_norms", p.Norms()}};
}

}  // namespace

double UserHyper::EffectiveGamma() const {
  if (gamma.has_value()) return *gamma;
  Require(beta > 0.0, ErrorCode::kParameter, "gamma must be given when beta is 0");
  return 1e-6 / beta;
}

void UserHyper::Validate() const {
  Require(std::isfinite(alpha) && alpha >= 0.0, ErrorCode::kParameter, "alpha must be >= 0");
  Require(std::isfinite(beta) && beta >= 0.0, ErrorCode::kParameter, "beta must be >= 0");
  const double g = EffectiveGamma();
  Require(std::isfinite(g) && g >= 0.0, ErrorCode::kParameter, "gamma must be >= 0");
  Require(std::isfinite(init_std) && init_std >= 0.0, ErrorCode::kParameter,
          "init_std must be >= 0");
  Require(m_model >= 1, ErrorCode::kParameter, "m_model must be >= 1");
  Require(m_perturbation >= 1, ErrorCode::kParameter, "m_perturbation must be >= 1");
  Require(batch_size >= 1, ErrorCode::kParameter, "batch size must be >= 1");
  Require(hidden >= 1, ErrorCode::kParameter, "hidden width must be >= 1");
  model_optimizer.Validate();
  template_optimizer.Validate();
}

nlohmann::ordered_json UserHyper::ToJson() const {
  return {{"alpha", alpha},
          {"beta", beta},
          {"gamma", EffectiveGamma()},
          {"init_std", init_std},
          {"m_model", m_model},
          {"m_perturbation", m_perturbation},
          {"batch_size", batch_size},
          {"hidden", hidden},
          {"task_match", TaskMatchName(task_match)},
          {"model_optimizer", model_optimizer.ToJson()},
          {"template_optimizer", template_optimizer.ToJson()},
          {"seed", seed}};
}

Var UserObjective(const nets::SurrogateModels& models, const nets::BoundModels& bound,
                  Var templates, const Tensor& x, const Tensor& clean_target,
                  std::span<const int> users, double beta, double gamma, TaskMatch match) {
  Require(x.rank() == 3 && templates.value().rank() == 2 &&
              templates.value().dim(1) == x.dim(1) * x.dim(2),
          ErrorCode::kDimension,
          "templates " + numerics::ShapeString(templates.value().shape()) +
              " do not match batch " + numerics::ShapeString(x.shape()));
  numerics::Graph& graph = *templates.graph;
  Var gathered = numerics::GatherRows(templates, users);
  Var perturbed = numerics::Add(graph.Constant(x), numerics::Reshape(gathered, x.shape()));
  Var total = PerturbationObjectiveSum(models, bound, perturbed, clean_target, users, beta, match);
  if (gamma != 0.0) total = numerics::Add(total, numerics::Scale(numerics::Sum(numerics::RowL2Norm(gathered)), gamma));
  return numerics::Scale(total, 1.0 / static_cast<double>(x.dim(0)));
}

double UserLoss(const nets::SurrogateModels& models, const Tensor& templates, const Tensor& x,
                std::span<const int> users, double beta, double gamma, TaskMatch match) {
  numerics::Graph graph;
  nets::BoundModels bound = nets::Bind(graph, models, nets::kNoParams);
  Var t = graph.Constant(templates);
  return UserObjective(models, bound, t, x, CleanTaskTarget(models, x, match), users, beta,
                       gamma, match)
      .value()
      .item();
}

Tensor FitTemplates(const nets::SurrogateModels& models, const Dataset& d, Tensor templates,
                    const std::vector<bool>& trainable, const UserHyper& hyper,
                    std::vector<double>* epoch_losses) {
  hyper.Validate();
  Require(templates.rank() == 2 && templates.dim(1) == d.trial_size() &&
              trainable.size() == templates.dim(0),
          ErrorCode::kDimension, "template table does not match the dataset");
  const double gamma = hyper.EffectiveGamma();
  const std::size_t n = d.size();
  const Tensor frozen = templates;
  if (n == 0) return templates;

  // The surrogates are fixed, so the clean targets are computed once.
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  const std::size_t k = static_cast<std::size_t>(models.num_classes);
  std::vector<double> targets(n * k);
  for (std::size_t lo = 0; lo < n; lo += 128) {
    const std::size_t hi = std::min(n, lo + 128);
    std::span<const std::size_t> idx(all.data() + lo, hi - lo);
    Tensor t = CleanTaskTarget(models, nets::BatchTensor(d, idx), hyper.task_match);
    std::copy(t.data().begin(), t.data().end(), targets.begin() + lo * k);
  }

  nets::Optimizer optimizer(hyper.template_optimizer);
  std::vector<std::size_t> order = all;
  const std::size_t bs = static_cast<std::size_t>(hyper.batch_size);
  for (int epoch = 0; epoch < hyper.m_perturbation; ++epoch) {
    Rng rng(MixSeed(hyper.seed, 300000 + static_cast<std::uint64_t>(epoch)));
    order = all;
    rng.Shuffle(std::span<std::size_t>(order));
    double total = 0.0;
    for (std::size_t lo = 0; lo < n; lo += bs) {
      const std::size_t hi = std::min(n, lo + bs), b = hi - lo;
      std::span<const std::size_t> idx(order.data() + lo, b);
      std::vector<int> users(b);
      Tensor target({b, k});
      for (std::size_t i = 0; i < b; ++i) {
        users[i] = d.user_labels[idx[i]];
        std::copy_n(targets.begin() + idx[i] * k, k, target.data().begin() + i * k);
      }
      numerics::Graph graph;
      nets::BoundModels bound = nets::Bind(graph, models, nets::kNoParams);
      Var table = graph.Param(templates);
      Var loss = UserObjective(models, bound, table, nets::BatchTensor(d, idx), target, users,
                               hyper.beta, gamma, hyper.task_match);
      const double value = loss.value().item();
      Require(std::isfinite(value), ErrorCode::kNumerical,
              "non-finite template loss in epoch " + std::to_string(epoch));
      total += value * static_cast<double>(b);
      const Var wrt[1] = {table};
      std::vector<Tensor> grads = graph.Grad(loss, wrt);
      const std::size_t ts = templates.dim(1);
      for (std::size_t u = 0; u < trainable.size(); ++u) {
        if (!trainable[u]) std::fill_n(grads[0].data().begin() + u * ts, ts, 0.0);
      }
      Tensor* params[1] = {&templates};
      optimizer.Step(params, grads);
      for (std::size_t u = 0; u < trainable.size(); ++u) {
        if (!trainable[u]) {
          std::copy_n(frozen.data().begin() + u * ts, ts, templates.data().begin() + u * ts);
        }
      }
    }
    if (epoch_losses != nullptr) epoch_losses->push_back(total / static_cast<double>(n));
  }
  return templates;
}

UserWiseResult GenerateUserWise(const Dataset& d, const nets::ExtractorConfig& extractor,
                                const UserHyper& hyper) {
  d.Validate();
  hyper.Validate();
  Require(!d.empty(), ErrorCode::kParameter, "cannot perturb an empty dataset");
  extractor.Validate(d.channels, d.samples);
  const std::size_t users = static_cast<std::size_t>(d.num_users);
  Tensor templates = InitialTemplates(users, d.trial_size(), hyper.init_std,
                                      MixSeed(hyper.seed, 21));
  UserWiseResult result;
  result.models = nets::TrainJoint(
      d, SurrogateTraining(hyper),
      nets::SurrogateModels::Create(extractor, d.channels, d.samples, d.num_classes,
                                    d.num_users, hyper.hidden, MixSeed(hyper.seed, 23)),
      &result.model_losses);
  templates = FitTemplates(result.models, d, std::move(templates),
                           std::vector<bool>(users, true), hyper, &result.template_losses);
  result.perturbation = ToSet(templates, d);
  result.perturbation.provenance = Provenance("user_wise", extractor, hyper, result.model_losses,
                                              result.template_losses, result.perturbation);
  result.perturbed = datakit::ApplyPerturbation(d, result.perturbation);
  return result;
}

PerturbationSet ExtendUserWise(const PerturbationSet& existing, const Dataset& released,
                               const Dataset& new_users, const nets::ExtractorConfig& extractor,
                               const UserHyper& hyper) {
  Require(existing.mode == datakit::PerturbationMode::kUserWise, ErrorCode::kParameter,
          "only user-wise templates can be extended");
  existing.Validate();
  hyper.Validate();
  const int old_count = static_cast<int>(existing.count());
  for (int u : new_users.user_labels) {
    Require(u >= old_count, ErrorCode::kParameter,
            "user " + std::to_string(u) + " already owns a template");
  }
  if (new_users.empty()) return existing;
  new_users.Validate();
  Require(new_users.channels == existing.channels && new_users.samples == existing.samples,
          ErrorCode::kDimension, "new users do not match the template shape");
  extractor.Validate(new_users.channels, new_users.samples);

  // Salts match GenerateUserWise, so extending an empty set reproduces it.
  std::vector<Dataset> parts;
  if (!released.empty()) {
    released.Validate();
    Require(released.channels == existing.channels && released.samples == existing.samples,
            ErrorCode::kDimension, "released data do not match the template shape");
    parts.push_back(released);
  }
  parts.push_back(new_users);
  Dataset surrogate_data = datakit::Concatenate(parts);
  const std::size_t total_users = static_cast<std::size_t>(
      std::max(surrogate_data.num_users, old_count));
  surrogate_data.num_users = static_cast<int>(total_users);

  const std::size_t ts = existing.trial_size();
  Tensor templates = InitialTemplates(total_users, ts, hyper.init_std,
                                      MixSeed(hyper.seed, 21));
  std::copy(existing.deltas.begin(), existing.deltas.end(), templates.data().begin());
  std::vector<bool> trainable(total_users, false);
  for (std::size_t u = static_cast<std::size_t>(old_count); u < total_users; ++u) {
    trainable[u] = true;
  }

  std::vector<double> model_losses, template_losses;
  nets::SurrogateModels models = nets::TrainJoint(
      surrogate_data, SurrogateTraining(hyper),
      nets::SurrogateModels::Create(extractor, surrogate_data.channels, surrogate_data.samples,
                                    surrogate_data.num_classes, surrogate_data.num_users,
                                    hyper.hidden, MixSeed(hyper.seed, 23)),
      &model_losses);
  Dataset fit_data = new_users;
  fit_data.num_users = static_cast<int>(total_users);
  templates = FitTemplates(models, fit_data, std::move(templates), trainable, hyper,
                           &template_losses);
  PerturbationSet merged = ToSet(templates, new_users);
  merged.provenance = Provenance("user_wise_extension", extractor, hyper, model_losses,
                                 template_losses, merged);
  merged.provenance["previous"] = existing.provenance;
  return merged;
}

}  // namespace eegshield::shield
