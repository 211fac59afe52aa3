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

#ifndef EEGSHIELD_NETS_CHECKPOINT_H_
#define EEGSHIELD_NETS_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "eegshield/nets/models.h"

namespace eegshield::nets {

// "EEGMODL1" | u32 byte length + UTF-8 JSON config | for every parameter in
// declaration order: u32 rank, rank x u32 dims, f32 values. Little-endian.
std::vector<std::uint8_t> EncodeCheckpoint(const SurrogateModels& models);
SurrogateModels DecodeCheckpoint(std::span<const std::uint8_t> bytes);

void WriteCheckpoint(const SurrogateModels& models, const std::filesystem::path& path);
SurrogateModels ReadCheckpoint(const std::filesystem::path& path);

}  // namespace eegshield::nets

#endif  // EEGSHIELD_NETS_CHECKPOINT_H_
