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

#ifndef EEGSHIELD_COMMON_RANDOM_H_
#define EEGSHIELD_COMMON_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>

namespace eegshield {

// Seeded generator with distribution helpers whose output is fixed by the
// engine bits alone. The standard distributions are implementation-defined,
// which would make files differ across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Box-Muller; the second variate is discarded to keep the stream simple.
  double Normal(double mean = 0.0, double stddev = 1.0);

  // Uniform integer in [0, n).
  std::uint64_t Below(std::uint64_t n);

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(Below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  std::uint64_t Next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent stream seed from a base seed and a salt.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t salt);

}  // namespace eegshield

#endif  // EEGSHIELD_COMMON_RANDOM_H_
