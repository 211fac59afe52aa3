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

#ifndef EEGSHIELD_DATAKIT_PERTURBATION_H_
#define EEGSHIELD_DATAKIT_PERTURBATION_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "eegshield/datakit/dataset.h"

namespace eegshield::datakit {

enum class PerturbationMode : unsigned { kSampleWise = 0, kUserWise = 1 };

std::string_view PerturbationModeName(PerturbationMode mode);

// Additive perturbations for a dataset: one delta per trial (sample-wise) or
// one template per user (user-wise).
struct PerturbationSet {
  PerturbationMode mode = PerturbationMode::kSampleWise;
  int channels = 0;
  int samples = 0;
  // l-infinity radius of sample-wise deltas; 0 for user-wise templates.
  double epsilon = 0.0;
  std::vector<double> deltas;
  // Hyperparameters and seed that produced the set. Kept in memory and in the
  // JSON sidecar; the binary file carries only the numeric payload.
  nlohmann::ordered_json provenance = nlohmann::ordered_json::object();

  std::size_t trial_size() const {
    return static_cast<std::size_t>(channels) * static_cast<std::size_t>(samples);
  }
  std::size_t count() const {
    return trial_size() == 0 ? 0 : deltas.size() / trial_size();
  }
  std::span<const double> delta(std::size_t i) const {
    return {deltas.data() + i * trial_size(), trial_size()};
  }
  std::span<double> delta(std::size_t i) {
    return {deltas.data() + i * trial_size(), trial_size()};
  }

  double MaxAbs() const;
  // Euclidean norm of each delta.
  std::vector<double> Norms() const;

  // Sample-wise sets must respect |delta|_inf <= epsilon exactly.
  void Validate() const;
};

// Returns x_i + delta_i (sample-wise) or x_i + delta_{u_i} (user-wise). The
// input dataset is not modified.
Dataset ApplyPerturbation(const Dataset& d, const PerturbationSet& p);

// Nearest value representable as f32 whose magnitude does not exceed |v|.
// Keeps stored deltas inside the l-infinity ball after narrowing to f32.
double RoundTowardZeroF32(double v);

}  // namespace eegshield::datakit

#endif  // EEGSHIELD_DATAKIT_PERTURBATION_H_
