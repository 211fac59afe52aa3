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

#ifndef EEGSHIELD_DATAKIT_SYNTH_H_
#define EEGSHIELD_DATAKIT_SYNTH_H_

#include <cstdint>

#include "json.hpp"
#include "eegshield/datakit/dataset.h"

namespace eegshield::datakit {

// Synthetic EEG-like data with separately controllable task, identity and
// session signatures. Every trial is
//
//   task_amplitude * T_y + identity_amplitude * B_u + session_amplitude * C_s
//   + N(0, noise_std^2)
//
// T_y: class-specific windowed oscillation of 6 to 12 cycles per trial on the
//      first half of the channels.
// B_u: per-user spatial pattern modulating a slow sinusoid of 0.5 to 2 cycles
//      per trial; the phase is drawn per trial.
// C_s: per-session constant offset per channel.
struct SynthConfig {
  int users = 8;
  int sessions = 3;
  int trials_per_user_per_session = 40;
  int channels = 8;
  int samples = 128;
  int classes = 2;
  double identity_amplitude = 1.0;
  double task_amplitude = 1.0;
  double session_amplitude = 0.2;
  double noise_std = 1.0;
  std::uint64_t seed = 7;
  // First user label; later batches of an online stream continue numbering.
  int first_user = 0;

  void Validate() const;
  nlohmann::ordered_json ToJson() const;
};

// The configuration the acceptance suite runs on: 8 users, 3 sessions,
// 40 trials per user and session (N = 960), 8 x 128 trials, 2 classes.
SynthConfig ReferenceSynthConfig();

// Pure function of the configuration; values are f32-representable so the
// result round-trips through the dataset file exactly. User labels run from
// first_user to first_user + users - 1 and num_users is first_user + users.
Dataset SynthGenerate(const SynthConfig& cfg);

}  // namespace eegshield::datakit

#endif  // EEGSHIELD_DATAKIT_SYNTH_H_
