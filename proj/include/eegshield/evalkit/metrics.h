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

#ifndef EEGSHIELD_EVALKIT_METRICS_H_
#define EEGSHIELD_EVALKIT_METRICS_H_

#include <span>

namespace eegshield::evalkit {

// Mean per-class recall over the classes present in `labels`. Labels must lie
// in [0, num_classes); predictions outside that range count as errors.
double Bca(std::span<const int> predictions, std::span<const int> labels, int num_classes);

// Fraction of predictions equal to the user labels.
double Uia(std::span<const int> predictions, std::span<const int> users);

}  // namespace eegshield::evalkit

#endif  // EEGSHIELD_EVALKIT_METRICS_H_
