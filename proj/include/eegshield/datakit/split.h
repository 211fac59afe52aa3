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

#ifndef EEGSHIELD_DATAKIT_SPLIT_H_
#define EEGSHIELD_DATAKIT_SPLIT_H_

#include <cstddef>
#include <vector>

#include "eegshield/datakit/dataset.h"

namespace eegshield::datakit {

struct LosoSplit {
  Dataset train;
  Dataset test;
  // Positions of the split trials in the source dataset.
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  // user_map[original] = compact label, -1 for users absent from both splits.
  std::vector<int> user_map;
};

// The held session is the training set and every other session is the test
// set. User labels are compacted with one mapping for both splits: users
// present in training come first in ascending order, test-only users after.
LosoSplit SplitLoso(const Dataset& d, int held_session);

// Relabels sessions for single-session data: each user's trials, in dataset
// order, are cut into `parts` contiguous chunks of near-equal length.
Dataset SplitSessionsByIndex(const Dataset& d, int parts);

}  // namespace eegshield::datakit

#endif  // EEGSHIELD_DATAKIT_SPLIT_H_
