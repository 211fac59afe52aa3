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

#ifndef EEGSHIELD_EVALKIT_ONLINE_H_
#define EEGSHIELD_EVALKIT_ONLINE_H_

#include <span>

#include "eegshield/datakit/dataset.h"
#include "eegshield/datakit/perturbation.h"
#include "eegshield/evalkit/experiment.h"
#include "eegshield/nets/models.h"
#include "eegshield/nets/train.h"
#include "eegshield/shield/user_wise.h"

namespace eegshield::evalkit {

struct OnlineOptions {
  nets::ExtractorConfig extractor;
  shield::UserHyper hyper;
  // Evaluation-side two-stage training.
  nets::TrainConfig train;
  // Session used for training at every step; the others are tested.
  int train_session = 0;
  // Also evaluate the clean stream at every step.
  bool clean_baseline = true;
};

// Processes batches of new users in order. At each step the user-wise
// templates are extended to the new users, evaluation models are trained on
// all data released so far and UIA is measured on the clean non-training
// sessions, separately for users from earlier batches and for the new batch.
// The report carries one record per step under `steps`. The final template
// set goes to `templates` when given.
ExperimentReport RunOnline(std::span<const datakit::Dataset> batches,
                           const OnlineOptions& options,
                           datakit::PerturbationSet* templates = nullptr);

}  // namespace eegshield::evalkit

#endif  // EEGSHIELD_EVALKIT_ONLINE_H_
