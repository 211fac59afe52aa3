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

#ifndef EEGSHIELD_DATAKIT_IO_H_
#define EEGSHIELD_DATAKIT_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "eegshield/datakit/dataset.h"
#include "eegshield/datakit/perturbation.h"

namespace eegshield::datakit {

// Dataset container, little-endian:
//   "EEGUNLRN" | u32 version=1 | u32 N, c, t, K, U, S |
//   N x u32 task | N x u32 user | N x u32 session |
//   N*c*t x f32 trial data | u32 CRC-32 of all preceding bytes.
//
// Perturbation container:
//   "EEGDELTA" | u32 version=1 | u32 mode | u32 count, c, t | f32 epsilon |
//   count*c*t x f32 deltas | u32 CRC-32.
//
// Values are narrowed to f32 on encode, so a dataset round-trips exactly when
// its values are f32-representable.

inline constexpr std::uint32_t kFormatVersion = 1;

std::uint32_t Crc32(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> EncodeDataset(const Dataset& d);
// Bad magic or version -> FormatError; truncation or CRC mismatch ->
// CorruptionError; labels outside the declared ranges -> ValidationError.
Dataset DecodeDataset(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> EncodePerturbation(const PerturbationSet& p);
PerturbationSet DecodePerturbation(std::span<const std::uint8_t> bytes);

void WriteDataset(const Dataset& d, const std::filesystem::path& path);
Dataset ReadDataset(const std::filesystem::path& path);

void WritePerturbation(const PerturbationSet& p, const std::filesystem::path& path);
PerturbationSet ReadPerturbation(const std::filesystem::path& path);

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes);

}  // namespace eegshield::datakit

#endif  // EEGSHIELD_DATAKIT_IO_H_
