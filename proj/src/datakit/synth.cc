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

#include "eegshield/datakit/synth.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "eegshield/common/error.h"
#include "eegshield/common/random.h"

namespace eegshield::datakit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Draws a vector of standard normals scaled to unit root-mean-square.
std::vector<double> UnitRmsPattern(Rng& rng, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  double ss = 0.0;
  for (double& x : v) {
    x = rng.Normal();
    ss += x * x;
  }
  const double scale = ss > 0.0 ? 1.0 / std::sqrt(ss / n) : 0.0;
  for (double& x : v) x *= scale;
  return v;
}

}  // namespace

void SynthConfig::Validate() const {
  Require(users >= 1 && sessions >= 1 && trials_per_user_per_session >= 1 &&
              channels >= 1 && samples >= 1 && classes >= 1,
          ErrorCode::kParameter, "synthetic counts must be >= 1");
  Require(identity_amplitude >= 0.0 && task_amplitude >= 0.0 &&
              session_amplitude >= 0.0 && noise_std >= 0.0,
          ErrorCode::kParameter, "synthetic amplitudes must be >= 0");
  Require(first_user >= 0, ErrorCode::kParameter, "first_user must be >= 0");
}

nlohmann::ordered_json SynthConfig::ToJson() const {
  return {{"users", users},
          {"sessions", sessions},
          {"trials_per_user_per_session", trials_per_user_per_session},
          {"channels", channels},
          {"samples", samples},
          {"classes", classes},
          {"identity_amplitude", identity_amplitude},
          {"task_amplitude", task_amplitude},
          {"session_amplitude", session_amplitude},
          {"noise_std", noise_std},
          {"seed", seed},
          {"first_user", first_user}};
}

SynthConfig ReferenceSynthConfig() { return SynthConfig{}; }

Dataset SynthGenerate(const SynthConfig& cfg) {
  cfg.Validate();
  const int c = cfg.channels;
  const int t = cfg.samples;
  const std::size_t ts = static_cast<std::size_t>(c) * static_cast<std::size_t>(t);

  // Task patterns, shared by every user of a stream: seeded independently of
  // first_user so later batches reuse them.
  Rng task_rng(MixSeed(cfg.seed, 1));
  const int task_channels = (c + 1) / 2;
  std::vector<std::vector<double>> task(static_cast<std::size_t>(cfg.classes),
                                        std::vector<double>(ts, 0.0));
  for (int k = 0; k < cfg.classes; ++k) {
    const std::vector<double> weights = UnitRmsPattern(task_rng, task_channels);
    const double freq = task_rng.Uniform(6.0, 12.0);
    const double phase = task_rng.Uniform(0.0, kTwoPi);
    const double center = task_rng.Uniform(0.35, 0.65) * t;
    const double width = t / 6.0;
    for (int ch = 0; ch < task_channels; ++ch) {
      for (int tau = 0; tau < t; ++tau) {
        const double z = (tau - center) / width;
        task[k][static_cast<std::size_t>(ch) * t + tau] =
            weights[ch] * std::sin(kTwoPi * freq * tau / t + phase) * std::exp(-0.5 * z * z);
      }
    }
  }

  // Session offsets, also shared across a stream.
  Rng session_rng(MixSeed(cfg.seed, 2));
  std::vector<std::vector<double>> session(static_cast<std::size_t>(cfg.sessions));
  for (auto& s : session) s = UnitRmsPattern(session_rng, c);

  Dataset d;
  d.channels = c;
  d.samples = t;
  d.num_classes = cfg.classes;
  d.num_users = cfg.first_user + cfg.users;
  d.num_sessions = cfg.sessions;
  const std::size_t n = static_cast<std::size_t>(cfg.users) * cfg.sessions *
                        cfg.trials_per_user_per_session;
  d.data.reserve(n * ts);

  for (int local = 0; local < cfg.users; ++local) {
    const int user = cfg.first_user + local;
    Rng user_rng(MixSeed(cfg.seed, 1000 + static_cast<std::uint64_t>(user)));
    const std::vector<double> spatial = UnitRmsPattern(user_rng, c);
    const double freq = user_rng.Uniform(0.5, 2.0);
    for (int s = 0; s < cfg.sessions; ++s) {
      for (int j = 0; j < cfg.trials_per_user_per_session; ++j) {
        const int y = j % cfg.classes;
        const double phase = user_rng.Uniform(0.0, kTwoPi);
        for (int ch = 0; ch < c; ++ch) {
          for (int tau = 0; tau < t; ++tau) {
            const std::size_t idx = static_cast<std::size_t>(ch) * t + tau;
            double v = cfg.task_amplitude * task[y][idx];
            v += cfg.identity_amplitude * spatial[ch] *
                 std::sin(kTwoPi * freq * tau / t + phase);
            v += cfg.session_amplitude * session[s][ch];
            v += user_rng.Normal(0.0, cfg.noise_std);
            d.data.push_back(static_cast<double>(static_cast<float>(v)));
          }
        }
        d.task_labels.push_back(y);
        d.user_labels.push_back(user);
        d.session_labels.push_back(s);
      }
    }
  }
  return d;
}

}  // namespace eegshield::datakit
