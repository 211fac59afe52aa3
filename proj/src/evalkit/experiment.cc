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

#include "eegshield/evalkit/experiment.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "eegshield/common/error.h"
#include "eegshield/common/parallel.h"
#include "eegshield/datakit/split.h"
#include "eegshield/evalkit/metrics.h"

namespace eegshield::evalkit {

namespace {

using datakit::Dataset;

void CheckPaired(const Dataset& clean, const Dataset& perturbed) {
  Require(perturbed.channels == clean.channels && perturbed.samples == clean.samples &&
              perturbed.num_classes == clean.num_classes &&
              perturbed.num_users == clean.num_users &&
              perturbed.num_sessions == clean.num_sessions &&
              perturbed.task_labels == clean.task_labels &&
              perturbed.user_labels == clean.user_labels &&
              perturbed.session_labels == clean.session_labels,
          ErrorCode::kValidation,
          "perturbed dataset does not match the clean dataset's shape and labels");
}

void AuditSplit(const datakit::LosoSplit& split, int session) {
  std::vector<std::size_t> train = split.train_indices, test = split.test_indices;
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  std::vector<std::size_t> common;
  std::set_intersection(train.begin(), train.end(), test.begin(), test.end(),
                        std::back_inserter(common));
  Require(common.empty(), ErrorCode::kProtocol,
          "fold for session " + std::to_string(session) + " trains on trial " +
              (common.empty() ? std::string() : std::to_string(common.front())) +
              " that is also tested");
}

FoldResult RunFold(const Dataset& clean, const Dataset& source,
                   const nets::ExtractorConfig& extractor, const EvalOptions& options,
                   int session, int repeat) {
  datakit::LosoSplit train_split = datakit::SplitLoso(source, session);
  datakit::LosoSplit test_split =
      options.perturb_test ? train_split : datakit::SplitLoso(clean, session);
  AuditSplit(train_split, session);
  Require(train_split.train_indices == test_split.train_indices &&
              train_split.test_indices == test_split.test_indices &&
              train_split.user_map == test_split.user_map,
          ErrorCode::kProtocol, "train and test splits disagree");
  const Dataset& train = train_split.train;
  const Dataset& test = test_split.test;

  FoldResult fold;
  fold.held_session = session;
  fold.repeat = repeat;
  fold.seed = options.train.seed + static_cast<std::uint64_t>(repeat);
  nets::TrainConfig cfg = options.train;
  cfg.seed = fold.seed;

  nets::EpochObserver observer;
  if (options.curves) {
    observer = [&](const nets::EpochPredictions& p) {
      if (p.stage == 1) {
        fold.curves.train_bca.push_back(Bca(p.train, train.task_labels, train.num_classes));
        fold.curves.test_bca.push_back(Bca(p.monitor, test.task_labels, test.num_classes));
      } else {
        fold.curves.train_uia.push_back(Uia(p.train, train.user_labels));
        fold.curves.test_uia.push_back(Uia(p.monitor, test.user_labels));
      }
    };
  }
  nets::TwoStageResult trained =
      nets::TrainTwoStage(train, cfg, extractor, options.curves ? &test : nullptr, observer);
  fold.bca = Bca(nets::PredictTask(trained.models, test), test.task_labels, test.num_classes);
  fold.uia = Uia(nets::PredictUser(trained.models, test), test.user_labels);
  return fold;
}

ExperimentReport Run(const Dataset& clean, const Dataset* perturbed,
                     const nets::ExtractorConfig& extractor, const EvalOptions& options) {
  options.Validate();
  clean.Validate();
  Require(!clean.empty(), ErrorCode::kParameter, "cannot evaluate an empty dataset");
  Require(clean.num_sessions >= 2, ErrorCode::kProtocol,
          "leave-one-session-out needs at least 2 sessions; split single-session data "
          "into sessions first");
  if (perturbed != nullptr) {
    perturbed->Validate();
    CheckPaired(clean, *perturbed);
  }
  extractor.Validate(clean.channels, clean.samples);
  const Dataset& source = perturbed != nullptr ? *perturbed : clean;

  const int sessions = clean.num_sessions;
  const std::size_t count = static_cast<std::size_t>(sessions * options.repeats);
  std::vector<FoldResult> folds(count);
  ParallelFor(count, options.threads, [&](std::size_t i) {
    const int repeat = static_cast<int>(i) / sessions;
    const int session = static_cast<int>(i) % sessions;
    folds[i] = RunFold(clean, source, extractor, options, session, repeat);
  });

  ExperimentReport report;
  report.condition = options.condition.empty()
                         ? std::string(perturbed != nullptr ? "perturbed" : "clean")
                         : options.condition;
  report.extractor_cfg = extractor.ToJson();
  report.hyper = options.ToJson();
  report.folds = std::move(folds);
  report.aggregate = Summarize(report.folds);
  return report;
}

}  // namespace

void EvalOptions::Validate() const {
  train.Validate();
  Require(repeats >= 1, ErrorCode::kParameter, "repeats must be >= 1");
  Require(threads >= 1, ErrorCode::kParameter, "threads must be >= 1");
}

nlohmann::ordered_json EvalOptions::ToJson() const {
  return {{"train", train.ToJson()},
          {"repeats", repeats},
          {"perturb_test", perturb_test},
          {"curves", curves}};
}

Aggregate Summarize(const std::vector<FoldResult>& folds) {
  Aggregate a;
  if (folds.empty()) return a;
  const double n = static_cast<double>(folds.size());
  for (const FoldResult& f : folds) {
    a.bca_mean += f.bca;
    a.uia_mean += f.uia;
  }
  a.bca_mean /= n;
  a.uia_mean /= n;
  if (folds.size() > 1) {
    for (const FoldResult& f : folds) {
      a.bca_std += (f.bca - a.bca_mean) * (f.bca - a.bca_mean);
      a.uia_std += (f.uia - a.uia_mean) * (f.uia - a.uia_mean);
    }
    a.bca_std = std::sqrt(a.bca_std / (n - 1.0));
    a.uia_std = std::sqrt(a.uia_std / (n - 1.0));
  }
  return a;
}

ExperimentReport RunLoso(const Dataset& clean, const Dataset* perturbed,
                         const nets::ExtractorConfig& extractor, const EvalOptions& options) {
  return Run(clean, perturbed, extractor, options);
}

ExperimentReport RunTransfer(const Dataset& clean, const Dataset* perturbed,
                             const nets::ExtractorConfig& craft_cfg,
                             const nets::ExtractorConfig& eval_cfg,
                             const EvalOptions& options) {
  ExperimentReport report = Run(clean, perturbed, eval_cfg, options);
  report.extractor_cfg = craft_cfg.ToJson();
  report.eval_cfg = eval_cfg.ToJson();
  return report;
}

void PairWithBaseline(ExperimentReport& report, const ExperimentReport& clean) {
  Require(report.folds.size() == clean.folds.size(), ErrorCode::kProtocol,
          "paired reports have different fold counts");
  nlohmann::ordered_json folds = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < report.folds.size(); ++i) {
    const FoldResult& a = clean.folds[i];
    const FoldResult& b = report.folds[i];
    Require(a.held_session == b.held_session && a.repeat == b.repeat && a.seed == b.seed,
            ErrorCode::kProtocol, "paired reports have different fold structure");
    folds.push_back({{"session", a.held_session},
                     {"repeat", a.repeat},
                     {"bca", a.bca - b.bca},
                     {"uia", a.uia - b.uia}});
  }
  report.reduction = nlohmann::ordered_json{
      {"baseline", clean.condition},
      {"bca", clean.aggregate.bca_mean - report.aggregate.bca_mean},
      {"uia", clean.aggregate.uia_mean - report.aggregate.uia_mean},
      {"folds", std::move(folds)}};
}

}  // namespace eegshield::evalkit
