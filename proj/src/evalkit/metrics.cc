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

#include "eegshield/evalkit/metrics.h"

#include <string>
#include <vector>

#include "eegshield/common/error.h"

namespace eegshield::evalkit {

namespace {

void CheckLengths(std::span<const int> a, std::span<const int> b) {
  Require(!a.empty() || !b.empty(), ErrorCode::kParameter, "metric of an empty set");
  Require(a.size() == b.size(), ErrorCode::kDimension,
          std::to_string(a.size()) + " predictions for " + std::to_string(b.size()) +
              " labels");
}

}  // namespace

double Bca(std::span<const int> predictions, std::span<const int> labels, int num_classes) {
  CheckLengths(predictions, labels);
  Require(num_classes >= 1, ErrorCode::kParameter, "num_classes must be >= 1");
  std::vector<long> total(static_cast<std::size_t>(num_classes), 0);
  std::vector<long> hits(static_cast<std::size_t>(num_classes), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i];
    Require(y >= 0 && y < num_classes, ErrorCode::kLabel,
            "label " + std::to_string(y) + " outside [0, " + std::to_string(num_classes) + ")");
    ++total[static_cast<std::size_t>(y)];
    if (predictions[i] == y) ++hits[static_cast<std::size_t>(y)];
  }
  double sum = 0.0;
  int present = 0;
  for (std::size_t k = 0; k < total.size(); ++k) {
    if (total[k] == 0) continue;
    sum += static_cast<double>(hits[k]) / static_cast<double>(total[k]);
    ++present;
  }
  return sum / present;
}

double Uia(std::span<const int> predictions, std::span<const int> users) {
  CheckLengths(predictions, users);
  long hits = 0;
  for (std::size_t i = 0; i < users.size(); ++i) hits += predictions[i] == users[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(users.size());
}

}  // namespace eegshield::evalkit
