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

#ifndef EEGSHIELD_EVALKIT_REPORT_H_
#define EEGSHIELD_EVALKIT_REPORT_H_

#include <filesystem>
#include <string>

#include "json.hpp"
#include "eegshield/evalkit/experiment.h"

namespace eegshield::evalkit {

nlohmann::ordered_json ReportToJson(const ExperimentReport& report);
ExperimentReport ReportFromJson(const nlohmann::ordered_json& j);

// Long-format rows "step,fold,repeat,split,metric,value". Fold curves give
// one row per epoch, split and metric: stage-1 epochs carry bca, stage-2
// epochs carry uia and continue the step count. Online steps give rows for
// the splits all, existing and new with metrics uia_clean and uia_perturbed.
std::string CurvesCsv(const ExperimentReport& report);

// Writes report.json and curves.csv into `dir`, creating it if needed.
void WriteReport(const ExperimentReport& report, const std::filesystem::path& dir);

// Reads a report.json file.
ExperimentReport ReadReport(const std::filesystem::path& path);

}  // namespace eegshield::evalkit

#endif  // EEGSHIELD_EVALKIT_REPORT_H_
