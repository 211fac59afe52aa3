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

#include "eegshield/shield/sample_wise.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "eegshield/common/error.h"
#include "eegshield/common/parallel.h"
#include "eegshield/common/random.h"
#include "eegshield/numerics/ops.h"

namespace eegshield::shield {

namespace {

using datakit::Dataset;
using datakit::PerturbationSet;

PerturbationSet InitialDeltas(const Dataset& d, const SampleHyper& hyper) {
  PerturbationSet p;
  p.mode = datakit::PerturbationMode::kSampleWise;
  p.channels = d.channels;
  p.samples = d.samples;
  p.epsilon = hyper.epsilon;
  p.deltas.assign(d.data.size(), 0.0);
  if (hyper.epsilon > 0.0) {
    Rng rng(MixSeed(hyper.seed, 11));
    for (double& v : p.deltas) {
      v = datakit::RoundTowardZeroF32(rng.Uniform(-hyper.epsilon, hyper.epsilon));
    }
  }
  return p;
}

struct PassStats {
  double start = 0.0;
  double end = 0.0;
  std::size_t monotone = 0;
};

// One PgdUpdate over every trial, in independent chunks.
PassStats UpdateAll(const nets::SurrogateModels& models, const Dataset& d,
                    PerturbationSet& p, const SampleHyper& hyper) {
  const std::size_t n = d.size(), ts = d.trial_size();
  const std::size_t chunk = static_cast<std::size_t>(hyper.batch_size);
  const std::size_t chunks = (n + chunk - 1) / chunk;
  std::vector<PassStats> stats(chunks);
  ParallelFor(chunks, hyper.threads, [&](std::size_t c) {
    const std::size_t lo = c * chunk, hi = std::min(n, lo + chunk), b = hi - lo;
    std::vector<std::size_t> idx(b);
    for (std::size_t i = 0; i < b; ++i) idx[i] = lo + i;
    Tensor x = nets::BatchTensor(d, idx);
    Tensor delta({b, static_cast<std::size_t>(d.channels), static_cast<std::size_t>(d.samples)},
                 std::vector<double>(p.deltas.begin() + lo * ts, p.deltas.begin() + hi * ts));
    std::vector<int> users(d.user_labels.begin() + lo, d.user_labels.begin() + hi);
    std::vector<double> losses;
    Tensor out = PgdUpdate(models, x, delta, users, hyper, &losses, lo);
    auto dst = p.deltas.begin() + lo * ts;
    for (double v : out.data()) *dst++ = datakit::RoundTowardZeroF32(v);
    PassStats& s = stats[c];
    const std::size_t last = static_cast<std::size_t>(hyper.n_iter) * b;
    for (std::size_t i = 0; i < b; ++i) {
      s.start += losses[i];
      s.end += losses[last + i];
      bool ok = true;
      for (int k = 0; k < hyper.n_iter; ++k) {
        ok = ok && losses[(k + 1) * b + i] <= losses[k * b + i];
      }
      s.monotone += ok ? 1 : 0;
    }
  });
  PassStats total;
  for (const PassStats& s : stats) {
    total.start += s.start;
    total.end += s.end;
    total.monotone += s.monotone;
  }
  return total;
}

}  // namespace

void SampleHyper::Validate() const {
  Require(std::isfinite(alpha) && alpha >= 0.0, ErrorCode::kParameter, "alpha must be >= 0");
  Require(std::isfinite(beta) && beta >= 0.0, ErrorCode::kParameter, "beta must be >= 0");
  Require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorCode::kParameter,
          "epsilon must be >= 0");
  Require(std::isfinite(eta) && eta > 0.0, ErrorCode::kParameter, "eta must be > 0");
  Require(n_iter >= 1, ErrorCode::kParameter, "n_iter must be >= 1");
  Require(L >= 1, ErrorCode::kParameter, "L must be >= 1");
  Require(M >= 1, ErrorCode::kParameter, "M must be >= 1");
  Require(batch_size >= 1, ErrorCode::kParameter, "batch size must be >= 1");
  Require(hidden >= 1, ErrorCode::kParameter, "hidden width must be >= 1");
  Require(threads >= 1, ErrorCode::kParameter, "threads must be >= 1");
  optimizer.Validate();
}

nlohmann::ordered_json SampleHyper::ToJson() const {
  return {{"alpha", alpha},
          {"beta", beta},
          {"epsilon", epsilon},
          {"eta", eta},
          {"n_iter", n_iter},
          {"L", L},
          {"M", M},
          {"seed", seed},
          {"task_match", TaskMatchName(task_match)},
          {"warm_start", warm_start},
          {"reinit_models", reinit_models},
          {"batch_size", batch_size},
          {"hidden", hidden},
          {"optimizer", optimizer.ToJson()}};
}

Tensor PgdUpdate(const nets::SurrogateModels& models, const Tensor& x, const Tensor& delta,
                 std::span<const int> users, const SampleHyper& hyper,
                 std::vector<double>* losses, std::size_t first_trial) {
  hyper.Validate();
  Require(x.rank() == 3 && x.shape() == delta.shape(), ErrorCode::kDimension,
          "batch " + numerics::ShapeString(x.shape()) + " and deltas " +
              numerics::ShapeString(delta.shape()) + " must match");
  Require(delta.MaxAbs() <= hyper.epsilon, ErrorCode::kParameter,
          "incoming deltas exceed the l-infinity radius");
  const std::size_t b = x.dim(0), ts = x.size() / std::max<std::size_t>(b, 1);
  const Tensor target = CleanTaskTarget(models, x, hyper.task_match);
  if (losses != nullptr) losses->clear();

  Tensor current = delta;
  Tensor perturbed = x;
  for (int it = 0; it <= hyper.n_iter; ++it) {
    for (std::size_t i = 0; i < x.size(); ++i) perturbed[i] = x[i] + current[i];
    if (it == hyper.n_iter) {
      if (losses != nullptr) {
        auto last = PerTrialObjective(models, perturbed, target, users, hyper.beta,
                                      hyper.task_match);
        losses->insert(losses->end(), last.begin(), last.end());
      }
      break;
    }
    numerics::Graph graph;
    nets::BoundModels bound = nets::Bind(graph, models, nets::kNoParams);
    Var input = graph.Param(perturbed);
    Var loss = PerturbationObjectiveSum(models, bound, input, target, users, hyper.beta,
                                        hyper.task_match);
    const Var wrt[1] = {input};
    Tensor grad = std::move(graph.Grad(loss, wrt)[0]);
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t j = 0; j < ts; ++j) {
        Require(std::isfinite(grad[i * ts + j]), ErrorCode::kNumerical,
                "non-finite perturbation gradient for trial " +
                    std::to_string(first_trial + i) + " at step " + std::to_string(it));
      }
    }
    if (losses != nullptr) {
      auto vals = PerTrialObjective(models, perturbed, target, users, hyper.beta,
                                    hyper.task_match);
      losses->insert(losses->end(), vals.begin(), vals.end());
    }
    Tensor sign = numerics::Sign(grad);
    for (std::size_t i = 0; i < current.size(); ++i) current[i] -= hyper.eta * sign[i];
    current = numerics::ProjectLinf(current, hyper.epsilon);
  }
  return current;
}

SampleWiseResult GenerateSampleWise(const Dataset& d, const nets::ExtractorConfig& extractor,
                                    const SampleHyper& hyper, const RoundObserver& observer) {
  d.Validate();
  hyper.Validate();
  Require(!d.empty(), ErrorCode::kParameter, "cannot perturb an empty dataset");
  extractor.Validate(d.channels, d.samples);

  nets::TrainConfig tc;
  tc.alpha = hyper.alpha;
  tc.batch_size = hyper.batch_size;
  tc.epochs = hyper.L;
  tc.hidden = hyper.hidden;
  tc.seed = MixSeed(hyper.seed, 12);
  tc.optimizer = hyper.optimizer;
  auto fresh_models = [&](std::uint64_t salt) {
    return nets::SurrogateModels::Create(extractor, d.channels, d.samples, d.num_classes,
                                         d.num_users, hyper.hidden, MixSeed(hyper.seed, salt));
  };

  const PerturbationSet initial = InitialDeltas(d, hyper);
  PerturbationSet p = initial;
  nets::JointTrainer trainer(fresh_models(13), tc);
  SampleWiseResult result;
  const double n = static_cast<double>(d.size());

  for (int round = 0; round < hyper.M; ++round) {
    if (hyper.reinit_models && round > 0) {
      trainer = nets::JointTrainer(fresh_models(1000 + round), tc);
    }
    SampleRound log;
    log.round = round;
    {
      const Dataset current = datakit::ApplyPerturbation(d, p);
      for (int e = 0; e < hyper.L; ++e) log.train_losses.push_back(trainer.RunEpoch(current));
    }
    if (!hyper.warm_start) p.deltas = initial.deltas;
    const PassStats stats = UpdateAll(trainer.models(), d, p, hyper);
    log.objective_start = stats.start / n;
    log.objective_end = stats.end / n;
    log.monotone_fraction = static_cast<double>(stats.monotone) / n;
    log.max_abs = p.MaxAbs();
    Require(log.max_abs <= hyper.epsilon, ErrorCode::kContract,
            "deltas left the l-infinity ball in round " + std::to_string(round));
    if (observer) observer(log, p);
    result.rounds.push_back(std::move(log));
  }

  nlohmann::ordered_json rounds = nlohmann::ordered_json::array();
  for (const SampleRound& r : result.rounds) {
    rounds.push_back({{"round", r.round},
                      {"train_losses", r.train_losses},
                      {"objective_start", r.objective_start},
                      {"objective_end", r.objective_end},
                      {"monotone_fraction", r.monotone_fraction},
                      {"max_abs", r.max_abs}});
  }
  p.provenance = {{"generator", "sample_wise"},
                  {"extractor", extractor.ToJson()},
                  {"hyper", hyper.ToJson()},
                  {"rounds", std::move(rounds)}};
  result.perturbed = datakit::ApplyPerturbation(d, p);
  result.perturbation = std::move(p);
  result.models = trainer.TakeModels();
  return result;
}

}  // namespace eegshield::shield
