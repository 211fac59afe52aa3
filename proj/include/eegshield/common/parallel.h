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

#ifndef EEGSHIELD_COMMON_PARALLEL_H_
#define EEGSHIELD_COMMON_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace eegshield {

// Thread count from EEGSHIELD_THREADS, falling back to 1.
int DefaultThreads();

// Runs body(i) for i in [0, count) on up to `threads` workers. Work items are
// assigned round-robin by index, so the mapping from item to worker does not
// depend on timing. The first exception thrown by any item is rethrown after
// all workers join.
void ParallelFor(std::size_t count, int threads,
                 const std::function<void(std::size_t)>& body);

}  // namespace eegshield

#endif  // EEGSHIELD_COMMON_PARALLEL_H_
