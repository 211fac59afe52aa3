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

#ifndef EEGSHIELD_EVALKIT_EXPERIMENT_H_
#define EEGSHIELD_EVALKIT_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "eegshield/datakit/dataset.h"
#include "eegshield/nets/models.h"
#include "eegshield/nets/train.h"

namespace eegshield::evalkit {

// Per-epoch metric series of one fold. Stage-1 epochs yield task BCA, stage-2
// epochs yield UIA, each on the training and the test split.
struct FoldCurves {
  std::vector<double> train_bca;
  std::vector<double> test_bca;
  std::vector<double> train_uia;
  std::vector<double> test_uia;

  bool empty() const { return train_bca.empty() && train_uia.empty(); }
  bool operator==(const FoldCurves&) const = default;
};

struct FoldResult {
  int held_session = 0;
  int repeat = 0;
  std::uint64_t seed = 0;
  double bca = 0.0;
  double uia = 0.0;
  FoldCurves curves;

  bool operator==(const FoldResult&) const = default;
};

struct Aggregate {
  double bca_mean = 0.0;
  double bca_std = 0.0;
  double uia_mean = 0.0;
  double uia_std = 0.0;

  bool operator==(const Aggregate&) const = default;
};

struct ExperimentReport {
  // clean, sample_wise, user_wise or online.
  std::string condition = "clean";
  nlohmann::ordered_json extractor_cfg = nlohmann::ordered_json::object();
  // Present when evaluation used a different extractor than crafting.
  std::optional<nlohmann::ordered_json> eval_cfg;
  nlohmann::ordered_json hyper = nlohmann::ordered_json::object();
  std::vector<FoldResult> folds;
  Aggregate aggregate;
  // Clean minus this condition, per metric, when paired with a baseline.
  std::optional<nlohmann::ordered_json> reduction;
  // Step records of the online simulation.
  std::optional<nlohmann::ordered_json> steps;

  bool operator==(const ExperimentReport&) const = default;
};

struct EvalOptions {
  // Evaluation-side training; seed is the base seed of repeat 0.
  nets::TrainConfig train;
  int repeats = 5;
  // Label for the report.
  std::string condition;
  // Test on perturbed rather than clean non-training sessions.
  bool perturb_test = false;
  // Record per-epoch curves.
  bool curves = false;
  int threads = 1;

  void Validate() const;
  nlohmann::ordered_json ToJson() const;
};

// Mean and sample standard deviation over folds.
Aggregate Summarize(const std::vector<FoldResult>& folds);

// For every session s and repeat r: two-stage training on session s of the
// perturbed data (clean when null) with seed train.seed + r, then BCA and UIA
// on the other sessions of the clean data.
ExperimentReport RunLoso(const datakit::Dataset& clean, const datakit::Dataset* perturbed,
                         const nets::ExtractorConfig& extractor, const EvalOptions& options);

// RunLoso with evaluation models built from eval_cfg; the report names both
// configurations.
ExperimentReport RunTransfer(const datakit::Dataset& clean, const datakit::Dataset* perturbed,
                             const nets::ExtractorConfig& craft_cfg,
                             const nets::ExtractorConfig& eval_cfg,
                             const EvalOptions& options);

// Fills report.reduction with clean minus report aggregates and per-fold
// differences. Fold structure must match.
void PairWithBaseline(ExperimentReport& report, const ExperimentReport& clean);

}  // namespace eegshield::evalkit

#endif  // EEGSHIELD_EVALKIT_EXPERIMENT_H_
