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

#include "eegshield/datakit/dataset.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "eegshield/common/error.h"

namespace eegshield::datakit {

namespace {

void CheckLabels(const std::vector<int>& labels, int limit, const char* what) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= limit) {
      Fail(ErrorCode::kValidation,
           std::string(what) + " label " + std::to_string(labels[i]) +
               " of trial " + std::to_string(i) + " outside [0, " +
               std::to_string(limit) + ")");
    }
  }
}

}  // namespace

void Dataset::Validate() const {
  Require(channels >= 1 && samples >= 1, ErrorCode::kValidation,
          "channels and samples must be positive");
  Require(num_classes >= 1 && num_users >= 1 && num_sessions >= 1,
          ErrorCode::kValidation, "label ranges must be positive");
  const std::size_t n = task_labels.size();
  Require(user_labels.size() == n && session_labels.size() == n,
          ErrorCode::kValidation, "label arrays differ in length");
  Require(data.size() == n * trial_size(), ErrorCode::kValidation,
          "trial data length does not match N x channels x samples");
  CheckLabels(task_labels, num_classes, "task");
  CheckLabels(user_labels, num_users, "user");
  CheckLabels(session_labels, num_sessions, "session");
  for (double v : data) {
    Require(std::isfinite(v), ErrorCode::kValidation, "non-finite trial value");
  }
}

Dataset Dataset::Subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.channels = channels;
  out.samples = samples;
  out.num_classes = num_classes;
  out.num_users = num_users;
  out.num_sessions = num_sessions;
  const std::size_t ts = trial_size();
  out.data.reserve(indices.size() * ts);
  for (std::size_t i : indices) {
    Require(i < size(), ErrorCode::kParameter, "subset index out of range");
    auto t = trial(i);
    out.data.insert(out.data.end(), t.begin(), t.end());
    out.task_labels.push_back(task_labels[i]);
    out.user_labels.push_back(user_labels[i]);
    out.session_labels.push_back(session_labels[i]);
  }
  return out;
}

std::vector<int> UsersWithMultipleSessions(const Dataset& d) {
  std::vector<std::set<int>> sessions(static_cast<std::size_t>(std::max(0, d.num_users)));
  for (std::size_t i = 0; i < d.size(); ++i) {
    sessions[d.user_labels[i]].insert(d.session_labels[i]);
  }
  std::vector<int> users;
  for (std::size_t u = 0; u < sessions.size(); ++u) {
    if (sessions[u].size() >= 2) users.push_back(static_cast<int>(u));
  }
  return users;
}

Dataset Concatenate(std::span<const Dataset> parts) {
  Require(!parts.empty(), ErrorCode::kParameter, "nothing to concatenate");
  Dataset out;
  out.channels = parts[0].channels;
  out.samples = parts[0].samples;
  for (const Dataset& p : parts) {
    Require(p.channels == out.channels && p.samples == out.samples,
            ErrorCode::kDimension, "concatenated datasets differ in trial shape");
    out.num_classes = std::max(out.num_classes, p.num_classes);
    out.num_users = std::max(out.num_users, p.num_users);
    out.num_sessions = std::max(out.num_sessions, p.num_sessions);
    out.data.insert(out.data.end(), p.data.begin(), p.data.end());
    out.task_labels.insert(out.task_labels.end(), p.task_labels.begin(), p.task_labels.end());
    out.user_labels.insert(out.user_labels.end(), p.user_labels.begin(), p.user_labels.end());
    out.session_labels.insert(out.session_labels.end(), p.session_labels.begin(),
                              p.session_labels.end());
  }
  return out;
}

}  // namespace eegshield::datakit
