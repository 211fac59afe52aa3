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

#ifndef EEGSHIELD_NUMERICS_KERNELS_H_
#define EEGSHIELD_NUMERICS_KERNELS_H_

#include <cstddef>

namespace eegshield::numerics::internal {

// Dot product with eight interleaved partial sums combined in a fixed
// order. The association differs from a left-to-right sum but is the same
// on every call, so results stay reproducible while the compiler can keep
// the partial sums in vector registers.
inline double Dot(const double* __restrict a, const double* __restrict b, std::size_t n) {
  double s[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (int l = 0; l < 8; ++l) s[l] += a[i + l] * b[i + l];
  }
  for (; i < n; ++i) s[i & 7] += a[i] * b[i];
  return ((s[0] + s[4]) + (s[1] + s[5])) + ((s[2] + s[6]) + (s[3] + s[7]));
}

// y += w * x.
inline void Axpy(double w, const double* __restrict x, double* __restrict y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += w * x[i];
}

}  // namespace eegshield::numerics::internal

#endif  // EEGSHIELD_NUMERICS_KERNELS_H_
