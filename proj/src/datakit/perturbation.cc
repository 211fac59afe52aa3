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

#include "eegshield/datakit/perturbation.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "eegshield/common/error.h"

namespace eegshield::datakit {

std::string_view PerturbationModeName(PerturbationMode mode) {
  return mode == PerturbationMode::kSampleWise ? "sample_wise" : "user_wise";
}

double PerturbationSet::MaxAbs() const {
  double m = 0.0;
  for (double v : deltas) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> PerturbationSet::Norms() const {
  std::vector<double> norms;
  norms.reserve(count());
  for (std::size_t i = 0; i < count(); ++i) {
    double s = 0.0;
    for (double v : delta(i)) s += v * v;
    norms.push_back(std::sqrt(s));
  }
  return norms;
}

void PerturbationSet::Validate() const {
  Require(channels >= 1 && samples >= 1, ErrorCode::kValidation,
          "perturbation trial shape must be positive");
  Require(deltas.size() % trial_size() == 0, ErrorCode::kValidation,
          "perturbation payload is not a whole number of deltas");
  for (double v : deltas) {
    Require(std::isfinite(v), ErrorCode::kValidation, "non-finite delta value");
  }
  if (mode == PerturbationMode::kSampleWise) {
    Require(epsilon >= 0.0, ErrorCode::kValidation, "negative epsilon");
    Require(MaxAbs() <= epsilon, ErrorCode::kValidation,
            "sample-wise delta exceeds epsilon");
  }
}

Dataset ApplyPerturbation(const Dataset& d, const PerturbationSet& p) {
  Require(p.channels == d.channels && p.samples == d.samples,
          ErrorCode::kDimension, "perturbation trial shape differs from dataset");
  const bool sample_wise = p.mode == PerturbationMode::kSampleWise;
  if (sample_wise) {
    Require(p.count() == d.size(), ErrorCode::kParameter,
            "sample-wise set has " + std::to_string(p.count()) +
                " deltas for " + std::to_string(d.size()) + " trials");
  } else {
    Require(p.count() == static_cast<std::size_t>(d.num_users),
            ErrorCode::kParameter,
            "user-wise set has " + std::to_string(p.count()) +
                " templates for " + std::to_string(d.num_users) + " users");
  }
  Dataset out = d;
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto x = out.trial(i);
    auto delta = p.delta(sample_wise ? i : static_cast<std::size_t>(d.user_labels[i]));
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += delta[j];
  }
  return out;
}

double RoundTowardZeroF32(double v) {
  float f = static_cast<float>(v);
  if (std::abs(static_cast<double>(f)) > std::abs(v)) {
    f = std::nextafter(f, 0.0f);
  }
  return static_cast<double>(f);
}

}  // namespace eegshield::datakit
