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

#include "eegshield/evalkit/online.h"

#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "eegshield/common/error.h"
#include "eegshield/datakit/split.h"
#include "eegshield/evalkit/metrics.h"

namespace eegshield::evalkit {

namespace {

using datakit::Dataset;
using nlohmann::ordered_json;

struct StepMetrics {
  double bca = 0.0;
  double uia = 0.0;
  double uia_existing = std::numeric_limits<double>::quiet_NaN();
  double uia_new = 0.0;
};

ordered_json ToJson(const StepMetrics& m) {
  ordered_json j = {{"bca", m.bca}, {"uia", m.uia}};
  j["uia_existing"] = std::isnan(m.uia_existing) ? ordered_json(nullptr)
                                                 : ordered_json(m.uia_existing);
  j["uia_new"] = m.uia_new;
  return j;
}

// Trains on the training session of `source` and tests on the other sessions
// of `clean`. Users with ids below `first_new` count as existing.
StepMetrics Evaluate(const Dataset& clean, const Dataset& source, const OnlineOptions& options,
                     int first_new) {
  datakit::LosoSplit train_split = datakit::SplitLoso(source, options.train_session);
  datakit::LosoSplit test_split = datakit::SplitLoso(clean, options.train_session);
  const Dataset& test = test_split.test;
  nets::TwoStageResult trained =
      nets::TrainTwoStage(train_split.train, options.train, options.extractor);
  const std::vector<int> task = nets::PredictTask(trained.models, test);
  const std::vector<int> user = nets::PredictUser(trained.models, test);

  StepMetrics m;
  m.bca = Bca(task, test.task_labels, test.num_classes);
  m.uia = Uia(user, test.user_labels);
  std::vector<int> old_pred, old_true, new_pred, new_true;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const int original = clean.user_labels[test_split.test_indices[i]];
    auto& pred = original < first_new ? old_pred : new_pred;
    auto& truth = original < first_new ? old_true : new_true;
    pred.push_back(user[i]);
    truth.push_back(test.user_labels[i]);
  }
  if (!old_true.empty()) m.uia_existing = Uia(old_pred, old_true);
  if (!new_true.empty()) m.uia_new = Uia(new_pred, new_true);
  return m;
}

}  // namespace

ExperimentReport RunOnline(std::span<const Dataset> batches, const OnlineOptions& options,
                           datakit::PerturbationSet* templates) {
  Require(!batches.empty(), ErrorCode::kParameter, "online stream has no batches");
  options.hyper.Validate();
  options.train.Validate();
  std::set<int> seen;
  for (std::size_t k = 0; k < batches.size(); ++k) {
    batches[k].Validate();
    Require(!batches[k].empty(), ErrorCode::kParameter,
            "batch " + std::to_string(k) + " is empty");
    Require(batches[k].channels == batches[0].channels &&
                batches[k].samples == batches[0].samples,
            ErrorCode::kDimension, "batch " + std::to_string(k) + " has a different trial shape");
    std::set<int> mine(batches[k].user_labels.begin(), batches[k].user_labels.end());
    for (int u : mine) {
      Require(seen.insert(u).second, ErrorCode::kParameter,
              "user " + std::to_string(u) + " appears in more than one batch");
    }
  }
  Require(options.train_session >= 0, ErrorCode::kParameter, "train session must be >= 0");

  datakit::PerturbationSet current;
  current.mode = datakit::PerturbationMode::kUserWise;
  current.channels = batches[0].channels;
  current.samples = batches[0].samples;

  std::vector<Dataset> clean_parts;
  Dataset released;
  ordered_json steps = ordered_json::array();
  for (std::size_t k = 0; k < batches.size(); ++k) {
    const int first_new = static_cast<int>(current.count());
    current = shield::ExtendUserWise(current, released, batches[k], options.extractor,
                                     options.hyper);
    clean_parts.push_back(batches[k]);
    Dataset clean = datakit::Concatenate(clean_parts);
    clean.num_users = static_cast<int>(current.count());
    released = datakit::ApplyPerturbation(clean, current);

    ordered_json step = {{"step", k},
                         {"users", clean.num_users},
                         {"new_users", clean.num_users - first_new},
                         {"chance", 1.0 / clean.num_users}};
    step["perturbed"] = ToJson(Evaluate(clean, released, options, first_new));
    if (options.clean_baseline) step["clean"] = ToJson(Evaluate(clean, clean, options, first_new));
    steps.push_back(std::move(step));
  }

  ExperimentReport report;
  report.condition = "online";
  report.extractor_cfg = options.extractor.ToJson();
  report.hyper = {{"user_wise", options.hyper.ToJson()},
                  {"train", options.train.ToJson()},
                  {"train_session", options.train_session}};
  report.steps = std::move(steps);
  if (templates != nullptr) *templates = current;
  return report;
}

}  // namespace eegshield::evalkit
