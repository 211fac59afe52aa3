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

#include "eegshield/datakit/split.h"

#include <algorithm>
#include <string>

#include "eegshield/common/error.h"

namespace eegshield::datakit {

LosoSplit SplitLoso(const Dataset& d, int held_session) {
  Require(held_session >= 0 && held_session < d.num_sessions, ErrorCode::kParameter,
          "held session " + std::to_string(held_session) + " outside [0, " +
              std::to_string(d.num_sessions) + ")");
  LosoSplit split;
  for (std::size_t i = 0; i < d.size(); ++i) {
    (d.session_labels[i] == held_session ? split.train_indices : split.test_indices)
        .push_back(i);
  }

  std::vector<bool> in_train(d.num_users, false), in_test(d.num_users, false);
  for (std::size_t i : split.train_indices) in_train[d.user_labels[i]] = true;
  for (std::size_t i : split.test_indices) in_test[d.user_labels[i]] = true;
  split.user_map.assign(d.num_users, -1);
  int next = 0;
  for (int u = 0; u < d.num_users; ++u) {
    if (in_train[u]) split.user_map[u] = next++;
  }
  for (int u = 0; u < d.num_users; ++u) {
    if (!in_train[u] && in_test[u]) split.user_map[u] = next++;
  }

  split.train = d.Subset(split.train_indices);
  split.test = d.Subset(split.test_indices);
  for (Dataset* part : {&split.train, &split.test}) {
    part->num_users = std::max(next, 1);
    for (int& u : part->user_labels) u = split.user_map[u];
  }
  return split;
}

Dataset SplitSessionsByIndex(const Dataset& d, int parts) {
  Require(parts >= 1, ErrorCode::kParameter, "session parts must be >= 1");
  Dataset out = d;
  out.num_sessions = parts;
  std::vector<std::vector<std::size_t>> by_user(d.num_users);
  for (std::size_t i = 0; i < d.size(); ++i) by_user[d.user_labels[i]].push_back(i);
  for (const auto& trials : by_user) {
    const std::size_t n = trials.size();
    for (std::size_t j = 0; j < n; ++j) {
      out.session_labels[trials[j]] = static_cast<int>(j * parts / n);
    }
  }
  return out;
}

}  // namespace eegshield::datakit
