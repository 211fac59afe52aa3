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

#ifndef EEGSHIELD_DATAKIT_DATASET_H_
#define EEGSHIELD_DATAKIT_DATASET_H_

#include <cstddef>
#include <span>
#include <vector>

namespace eegshield::datakit {

// N trials of channels x samples values, each with a task label, a user label
// and a session label. Trial data is trial-major, then channel-major, then
// time-major.
struct Dataset {
  int channels = 0;
  int samples = 0;
  int num_classes = 0;
  int num_users = 0;
  int num_sessions = 0;
  std::vector<double> data;
  std::vector<int> task_labels;
  std::vector<int> user_labels;
  std::vector<int> session_labels;

  std::size_t size() const { return task_labels.size(); }
  bool empty() const { return task_labels.empty(); }
  std::size_t trial_size() const {
    return static_cast<std::size_t>(channels) * static_cast<std::size_t>(samples);
  }
  std::span<const double> trial(std::size_t i) const {
    return {data.data() + i * trial_size(), trial_size()};
  }
  std::span<double> trial(std::size_t i) {
    return {data.data() + i * trial_size(), trial_size()};
  }

  // Throws ValidationError on inconsistent lengths, labels outside their
  // declared ranges or non-finite values.
  void Validate() const;

  // Copies the listed trials, keeping the header fields.
  Dataset Subset(std::span<const std::size_t> indices) const;

  bool operator==(const Dataset&) const = default;
};

// Users that appear in at least two distinct sessions; leave-one-session-out
// evaluation is only meaningful for those.
std::vector<int> UsersWithMultipleSessions(const Dataset& d);

// Concatenates datasets with identical channel and sample counts. Label
// ranges become the maximum over the parts.
Dataset Concatenate(std::span<const Dataset> parts);

}  // namespace eegshield::datakit

#endif  // EEGSHIELD_DATAKIT_DATASET_H_
