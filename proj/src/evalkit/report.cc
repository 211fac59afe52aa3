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

#include "eegshield/evalkit/report.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "eegshield/common/error.h"

namespace eegshield::evalkit {

namespace {

using nlohmann::ordered_json;

std::string Number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  Require(static_cast<bool>(out), ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  Require(static_cast<bool>(out), ErrorCode::kIo, "failed writing " + path.string());
}

ordered_json CurvesToJson(const FoldCurves& c) {
  return {{"train_bca", c.train_bca},
          {"test_bca", c.test_bca},
          {"train_uia", c.train_uia},
          {"test_uia", c.test_uia}};
}

void Row(std::ostringstream& out, std::size_t step, int fold, int repeat, const char* split,
         const char* metric, double value) {
  out << step << ',' << fold << ',' << repeat << ',' << split << ',' << metric << ','
      << Number(value) << '\n';
}

}  // namespace

ordered_json ReportToJson(const ExperimentReport& report) {
  ordered_json j;
  j["condition"] = report.condition;
  j["extractor_cfg"] = report.extractor_cfg;
  if (report.eval_cfg.has_value()) j["eval_cfg"] = *report.eval_cfg;
  j["hyper"] = report.hyper;
  ordered_json folds = ordered_json::array();
  for (const FoldResult& f : report.folds) {
    ordered_json fj = {{"session", f.held_session},
                       {"repeat", f.repeat},
                       {"seed", f.seed},
                       {"bca", f.bca},
                       {"uia", f.uia}};
    if (!f.curves.empty()) fj["curves"] = CurvesToJson(f.curves);
    folds.push_back(std::move(fj));
  }
  j["folds"] = std::move(folds);
  j["aggregate"] = {{"bca_mean", report.aggregate.bca_mean},
                    {"bca_std", report.aggregate.bca_std},
                    {"uia_mean", report.aggregate.uia_mean},
                    {"uia_std", report.aggregate.uia_std}};
  if (report.reduction.has_value()) j["reduction"] = *report.reduction;
  if (report.steps.has_value()) j["steps"] = *report.steps;
  return j;
}

ExperimentReport ReportFromJson(const ordered_json& j) {
  try {
    ExperimentReport r;
    r.condition = j.at("condition").get<std::string>();
    r.extractor_cfg = j.at("extractor_cfg");
    if (j.contains("eval_cfg")) r.eval_cfg = j.at("eval_cfg");
    r.hyper = j.at("hyper");
    for (const ordered_json& fj : j.at("folds")) {
      FoldResult f;
      f.held_session = fj.at("session").get<int>();
      f.repeat = fj.at("repeat").get<int>();
      f.seed = fj.at("seed").get<std::uint64_t>();
      f.bca = fj.at("bca").get<double>();
      f.uia = fj.at("uia").get<double>();
      if (fj.contains("curves")) {
        const ordered_json& c = fj.at("curves");
        f.curves.train_bca = c.at("train_bca").get<std::vector<double>>();
        f.curves.test_bca = c.at("test_bca").get<std::vector<double>>();
        f.curves.train_uia = c.at("train_uia").get<std::vector<double>>();
        f.curves.test_uia = c.at("test_uia").get<std::vector<double>>();
      }
      r.folds.push_back(std::move(f));
    }
    const ordered_json& a = j.at("aggregate");
    r.aggregate.bca_mean = a.at("bca_mean").get<double>();
    r.aggregate.bca_std = a.at("bca_std").get<double>();
    r.aggregate.uia_mean = a.at("uia_mean").get<double>();
    r.aggregate.uia_std = a.at("uia_std").get<double>();
    if (j.contains("reduction")) r.reduction = j.at("reduction");
    if (j.contains("steps")) r.steps = j.at("steps");
    return r;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kFormat, std::string("malformed report: ") + e.what());
  }
}

std::string CurvesCsv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "step,fold,repeat,split,metric,value\n";
  for (const FoldResult& f : report.folds) {
    const FoldCurves& c = f.curves;
    for (std::size_t e = 0; e < c.train_bca.size(); ++e) {
      Row(out, e, f.held_session, f.repeat, "train", "bca", c.train_bca[e]);
      Row(out, e, f.held_session, f.repeat, "test", "bca", c.test_bca[e]);
    }
    const std::size_t offset = c.train_bca.size();
    for (std::size_t e = 0; e < c.train_uia.size(); ++e) {
      Row(out, offset + e, f.held_session, f.repeat, "train", "uia", c.train_uia[e]);
      Row(out, offset + e, f.held_session, f.repeat, "test", "uia", c.test_uia[e]);
    }
  }
  if (report.steps.has_value()) {
    const int fold = report.hyper.value("train_session", 0);
    for (const ordered_json& s : *report.steps) {
      const std::size_t step = s.at("step").get<std::size_t>();
      for (const char* cond : {"clean", "perturbed"}) {
        if (!s.contains(cond)) continue;
        const ordered_json& m = s.at(cond);
        const std::string metric = std::string("uia_") + cond;
        Row(out, step, fold, 0, "all", metric.c_str(), m.at("uia").get<double>());
        if (!m.at("uia_existing").is_null()) {
          Row(out, step, fold, 0, "existing", metric.c_str(), m.at("uia_existing").get<double>());
        }
        Row(out, step, fold, 0, "new", metric.c_str(), m.at("uia_new").get<double>());
      }
    }
  }
  return out.str();
}

void WriteReport(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  Require(!ec, ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  WriteText(dir / "report.json", ReportToJson(report).dump(2) + "\n");
  WriteText(dir / "curves.csv", CurvesCsv(report));
}

ExperimentReport ReadReport(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  Require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path.string());
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kFormat, "cannot parse " + path.string() + ": " + e.what());
  }
  return ReportFromJson(j);
}

}  // namespace eegshield::evalkit
