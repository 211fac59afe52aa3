// Copyright 2026 The EEG Shield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "eegshield/common/error.h"
#include "eegshield/common/parallel.h"
#include "eegshield/datakit/io.h"
#include "eegshield/datakit/perturbation.h"
#include "eegshield/datakit/synth.h"
#include "eegshield/evalkit/experiment.h"
#include "eegshield/evalkit/online.h"
#include "eegshield/evalkit/report.h"
#include "eegshield/nets/checkpoint.h"
#include "eegshield/nets/models.h"
#include "eegshield/nets/train.h"
#include "eegshield/shield/sample_wise.h"
#include "eegshield/shield/user_wise.h"

namespace eegshield::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void Usage(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

// Runs a validation step; parameter errors become usage errors.
template <typename F>
void Validated(F&& check) {
  try {
    check();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParameter) throw UsageError(e.what());
    throw;
  }
}

const std::map<std::string, double>& BetaPresets() {
  static const std::map<std::string, double> presets = {
      {"mi1", 0.03}, {"mi2", 0.01}, {"p300", 1.0}, {"ern", 0.5},
      {"ssvep", 0.05}, {"ns", 0.2}, {"tusz", 0.05}};
  return presets;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  Require(static_cast<bool>(out), ErrorCode::kIo, "cannot open " + path.string());
  out << text;
  out.close();
  Require(static_cast<bool>(out), ErrorCode::kIo, "failed writing " + path.string());
}

void WriteJson(const fs::path& path, const ordered_json& j) {
  WriteText(path, j.dump(2) + "\n");
}

void MakeDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  Require(!ec, ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
}

ordered_json Snapshot(const std::string& command, ordered_json body) {
  ordered_json j = {{"command", command}, {"version", kVersion}};
  for (auto& [k, v] : body.items()) j[k] = v;
  return j;
}

int ResolveThreads(int flag) { return flag > 0 ? flag : DefaultThreads(); }

nets::ExtractorConfig Extractor(const std::string& name) {
  nets::ExtractorConfig cfg;
  Validated([&] { cfg = nets::ExtractorPreset(name); });
  return cfg;
}

// ---------------------------------------------------------------------------
// Options shared between commands.

void AddSynthOptions(CLI::App* app, datakit::SynthConfig& cfg) {
  app->add_option("--users", cfg.users, "Users")->capture_default_str();
  app->add_option("--sessions", cfg.sessions, "Sessions per user")->capture_default_str();
  app->add_option("--trials", cfg.trials_per_user_per_session,
                  "Trials per user and session")->capture_default_str();
  app->add_option("--channels", cfg.channels, "Channels")->capture_default_str();
  app->add_option("--len", cfg.samples, "Samples per trial")->capture_default_str();
  app->add_option("--classes", cfg.classes, "Task classes")->capture_default_str();
  app->add_option("--identity-amplitude", cfg.identity_amplitude)->capture_default_str();
  app->add_option("--task-amplitude", cfg.task_amplitude)->capture_default_str();
  app->add_option("--session-amplitude", cfg.session_amplitude)->capture_default_str();
  app->add_option("--noise-std", cfg.noise_std)->capture_default_str();
}

struct TrainArgs {
  int batch_size = 64;
  int hidden = nets::kDefaultHiddenWidth;
  double lr = 1e-3;
  std::string optimizer = "adam";

  nets::OptimizerSettings Optimizer() const {
    nets::OptimizerSettings s;
    Validated([&] { s.kind = nets::ParseOptimizer(optimizer); });
    s.learning_rate = lr;
    return s;
  }
};

void AddTrainOptions(CLI::App* app, TrainArgs& t) {
  app->add_option("--batch-size", t.batch_size, "Mini-batch size")->capture_default_str();
  app->add_option("--hidden", t.hidden, "User head hidden width")->capture_default_str();
  app->add_option("--lr", t.lr, "Learning rate")->capture_default_str();
  app->add_option("--optimizer", t.optimizer, "adam or sgd")->capture_default_str();
}

struct UserArgs {
  double alpha = 0.1;
  double beta = 0.1;
  double gamma = -1.0;
  double init_std = 0.001;
  int m_model = 150;
  int m_pert = 150;
  double template_lr = 1e-3;
  std::string template_optimizer = "adam";
};

void AddUserOptions(CLI::App* app, UserArgs& u, bool with_trade_offs) {
  if (with_trade_offs) {
    app->add_option("--alpha", u.alpha, "User loss weight in surrogate training")
        ->capture_default_str();
    app->add_option("--beta", u.beta, "User loss weight in the perturbation objective");
  }
  app->add_option("--gamma", u.gamma, "Template norm weight (default 1e-6 / beta)");
  app->add_option("--init-std", u.init_std, "Initial template standard deviation")
      ->capture_default_str();
  app->add_option("--m-model", u.m_model, "Surrogate epochs")->capture_default_str();
  app->add_option("--m-pert", u.m_pert, "Template epochs")->capture_default_str();
  app->add_option("--template-lr", u.template_lr, "Template learning rate")
      ->capture_default_str();
  app->add_option("--template-optimizer", u.template_optimizer, "adam or sgd")
      ->capture_default_str();
}

shield::UserHyper MakeUserHyper(const UserArgs& u, double beta, const TrainArgs& t,
                                std::uint64_t seed) {
  shield::UserHyper h;
  h.alpha = u.alpha;
  h.beta = beta;
  if (u.gamma >= 0.0) h.gamma = u.gamma;
  h.init_std = u.init_std;
  h.m_model = u.m_model;
  h.m_perturbation = u.m_pert;
  h.batch_size = t.batch_size;
  h.hidden = t.hidden;
  h.model_optimizer = t.Optimizer();
  Validated([&] { h.template_optimizer.kind = nets::ParseOptimizer(u.template_optimizer); });
  h.template_optimizer.learning_rate = u.template_lr;
  h.seed = seed;
  Usage(u.gamma >= 0.0 || u.gamma == -1.0, "--gamma must be >= 0");
  Validated([&] { h.Validate(); });
  return h;
}

struct EvalArgs {
  int epochs = 150;
  int user_head_epochs = 150;
  TrainArgs train;
};

void AddEvalTrainOptions(CLI::App* app, EvalArgs& e) {
  app->add_option("--epochs", e.epochs, "Stage-1 epochs")->capture_default_str();
  app->add_option("--user-head-epochs", e.user_head_epochs, "Stage-2 epochs")
      ->capture_default_str();
  AddTrainOptions(app, e.train);
}

nets::TrainConfig MakeEvalTrain(const EvalArgs& e, std::uint64_t seed) {
  nets::TrainConfig tc;
  tc.epochs = e.epochs;
  tc.user_head_epochs = e.user_head_epochs;
  tc.batch_size = e.train.batch_size;
  tc.hidden = e.train.hidden;
  tc.optimizer = e.train.Optimizer();
  tc.seed = seed;
  Validated([&] { tc.Validate(); });
  return tc;
}

datakit::Dataset LoadDataset(const std::string& path, std::ostream& err) {
  err << "reading " << path << "\n";
  return datakit::ReadDataset(path);
}

// ---------------------------------------------------------------------------
// synth

struct SynthCommand {
  datakit::SynthConfig cfg;
  std::string output;
  bool json = false;

  int Run(std::ostream& out, std::ostream& err) {
    Usage(!output.empty(), "synth: --output is required");
    Validated([&] { cfg.Validate(); });
    const datakit::Dataset d = datakit::SynthGenerate(cfg);
    const fs::path path(output);
    if (path.has_parent_path()) MakeDir(path.parent_path());
    datakit::WriteDataset(d, path);
    const ordered_json snap =
        Snapshot("synth", {{"output", output}, {"synth", cfg.ToJson()}});
    WriteJson(path.string() + ".config.json", snap);
    err << "wrote " << d.size() << " trials to " << output << "\n";
    if (json) {
      ordered_json summary = snap;
      summary["trials"] = d.size();
      out << summary.dump() << "\n";
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// shield

struct ShieldCommand {
  std::string mode;
  std::string input;
  std::string output;
  std::string extractor = "cfgA";
  std::string preset;
  std::uint64_t seed = 0;
  int threads = 0;
  bool json = false;
  double beta = -1.0;
  // Sample-wise.
  double epsilon = 0.01;
  double eta = 0.002;
  int n_iter = 5;
  int L = 5;
  int M = 30;
  std::string task_match = "logits";
  bool cold_start = false;
  bool reinit_models = false;
  UserArgs user;
  TrainArgs train;

  double ResolveBeta() const {
    if (beta >= 0.0) return beta;
    Usage(beta == -1.0, "--beta must be >= 0");
    if (!preset.empty()) {
      auto it = BetaPresets().find(preset);
      Usage(it != BetaPresets().end(), "unknown preset '" + preset + "'");
      return it->second;
    }
    return 0.1;
  }

  int Run(std::ostream& out, std::ostream& err) {
    Usage(mode == "sample" || mode == "user", "shield: --mode must be sample or user");
    Usage(!input.empty(), "shield: --input is required");
    Usage(!output.empty(), "shield: --output is required");
    const double b = ResolveBeta();
    const nets::ExtractorConfig ex = Extractor(extractor);
    shield::TaskMatch match{};
    Validated([&] { match = shield::ParseTaskMatch(task_match); });

    ordered_json hyper_json;
    shield::SampleHyper sh;
    shield::UserHyper uh;
    if (mode == "sample") {
      sh.alpha = user.alpha;
      sh.beta = b;
      sh.epsilon = epsilon;
      sh.eta = eta;
      sh.n_iter = n_iter;
      sh.L = L;
      sh.M = M;
      sh.seed = seed;
      sh.task_match = match;
      sh.warm_start = !cold_start;
      sh.reinit_models = reinit_models;
      sh.batch_size = train.batch_size;
      sh.hidden = train.hidden;
      sh.optimizer = train.Optimizer();
      sh.threads = ResolveThreads(threads);
      Validated([&] { sh.Validate(); });
      hyper_json = sh.ToJson();
    } else {
      uh = MakeUserHyper(user, b, train, seed);
      uh.task_match = match;
      hyper_json = uh.ToJson();
    }

    const datakit::Dataset d = LoadDataset(input, err);
    const fs::path dir(output);
    MakeDir(dir);
    const ordered_json snap = Snapshot(
        "shield", {{"mode", mode},
                   {"input", input},
                   {"output", output},
                   {"extractor", ex.ToJson()},
                   {"preset", preset},
                   {"hyper", hyper_json}});
    WriteJson(dir / "config.json", snap);

    datakit::PerturbationSet p;
    datakit::Dataset perturbed;
    nets::SurrogateModels models;
    if (mode == "sample") {
      auto result = shield::GenerateSampleWise(
          d, ex, sh, [&](const shield::SampleRound& r, const datakit::PerturbationSet&) {
            err << "round " << (r.round + 1) << "/" << sh.M << " train loss "
                << r.train_losses.back() << " objective " << r.objective_start << " -> "
                << r.objective_end << " max|delta| " << r.max_abs << "\n";
          });
      p = std::move(result.perturbation);
      perturbed = std::move(result.perturbed);
      models = std::move(result.models);
    } else {
      err << "training surrogates for " << uh.m_model << " epochs, then templates for "
          << uh.m_perturbation << " epochs\n";
      auto result = shield::GenerateUserWise(d, ex, uh);
      p = std::move(result.perturbation);
      perturbed = std::move(result.perturbed);
      models = std::move(result.models);
    }
    datakit::WritePerturbation(p, dir / "perturbation.eegdelta");
    datakit::WriteDataset(perturbed, dir / "perturbed.eegu");
    WriteJson(dir / "provenance.json", p.provenance);
    nets::WriteCheckpoint(models, dir / "surrogates.ckpt");
    err << "wrote " << p.count() << " " << datakit::PerturbationModeName(p.mode)
        << " deltas to " << (dir / "perturbation.eegdelta").string() << "\n";
    if (json) {
      out << ordered_json{{"mode", mode},
                          {"count", p.count()},
                          {"max_abs", p.MaxAbs()},
                          {"output", output}}
                 .dump()
          << "\n";
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// eval

struct EvalCommand {
  std::string kind;
  std::string clean;
  std::string perturbed;
  std::string output;
  std::string extractor = "cfgA";
  std::string craft_cfg = "cfgA";
  std::string eval_cfg = "cfgB";
  std::string condition;
  std::string baseline;
  int repeats = 5;
  std::uint64_t seed = 0;
  int threads = 0;
  bool perturb_test = false;
  bool curves = false;
  bool json = false;
  EvalArgs eval;
  // Online stream.
  datakit::SynthConfig stream;
  int batches = 4;
  int train_session = 0;
  std::vector<std::string> batch_files;
  std::string preset;
  double beta = -1.0;
  UserArgs user;
  TrainArgs surrogate;

  evalkit::EvalOptions Options() const {
    evalkit::EvalOptions o;
    o.train = MakeEvalTrain(eval, seed);
    o.repeats = repeats;
    o.condition = condition;
    o.perturb_test = perturb_test;
    o.curves = curves;
    o.threads = ResolveThreads(threads);
    Validated([&] { o.Validate(); });
    return o;
  }

  void Finish(evalkit::ExperimentReport& report, const ordered_json& snap, std::ostream& out,
              std::ostream& err) {
    if (!baseline.empty()) {
      evalkit::PairWithBaseline(report, evalkit::ReadReport(baseline));
    }
    const fs::path dir(output);
    evalkit::WriteReport(report, dir);
    WriteJson(dir / "config.json", snap);
    if (!report.folds.empty()) {
      err << report.condition << ": BCA " << report.aggregate.bca_mean << " +- "
          << report.aggregate.bca_std << ", UIA " << report.aggregate.uia_mean << " +- "
          << report.aggregate.uia_std << " over " << report.folds.size() << " folds\n";
    }
    if (json) out << evalkit::ReportToJson(report).dump() << "\n";
  }

  int RunLoso(std::ostream& out, std::ostream& err, bool transfer) {
    Usage(!clean.empty(), "eval: --clean is required");
    Usage(!output.empty(), "eval: --output is required");
    Usage(!transfer || !perturbed.empty(), "eval transfer: --perturbed is required");
    const evalkit::EvalOptions options = Options();
    const nets::ExtractorConfig craft = Extractor(transfer ? craft_cfg : extractor);
    const nets::ExtractorConfig target = transfer ? Extractor(eval_cfg) : craft;
    const datakit::Dataset c = LoadDataset(clean, err);
    datakit::Dataset p;
    if (!perturbed.empty()) p = LoadDataset(perturbed, err);
    const datakit::Dataset* pp = perturbed.empty() ? nullptr : &p;
    MakeDir(output);
    ordered_json body = {{"kind", kind},
                         {"clean", clean},
                         {"perturbed", perturbed},
                         {"output", output},
                         {"baseline", baseline},
                         {"options", options.ToJson()},
                         {"seed", seed}};
    if (transfer) {
      body["craft_cfg"] = craft.ToJson();
      body["eval_cfg"] = target.ToJson();
    } else {
      body["extractor"] = craft.ToJson();
    }
    const ordered_json snap = Snapshot("eval", std::move(body));
    err << "evaluating " << c.num_sessions << " sessions x " << options.repeats
        << " repeats\n";
    evalkit::ExperimentReport report =
        transfer ? evalkit::RunTransfer(c, pp, craft, target, options)
                 : evalkit::RunLoso(c, pp, craft, options);
    Finish(report, snap, out, err);
    return kExitOk;
  }

  int RunOnline(std::ostream& out, std::ostream& err) {
    Usage(!output.empty(), "eval: --output is required");
    Usage(batches >= 1, "--batches must be >= 1");
    evalkit::OnlineOptions options;
    options.extractor = Extractor(extractor);
    double b = beta;
    if (b < 0.0) {
      Usage(b == -1.0, "--beta must be >= 0");
      b = 0.1;
      if (!preset.empty()) {
        auto it = BetaPresets().find(preset);
        Usage(it != BetaPresets().end(), "unknown preset '" + preset + "'");
        b = it->second;
      }
    }
    options.hyper = MakeUserHyper(user, b, surrogate, seed);
    options.train = MakeEvalTrain(eval, seed);
    options.train_session = train_session;

    std::vector<datakit::Dataset> stream_data;
    ordered_json source;
    if (!batch_files.empty()) {
      for (const std::string& f : batch_files) stream_data.push_back(LoadDataset(f, err));
      source = batch_files;
    } else {
      Validated([&] { stream.Validate(); });
      for (int k = 0; k < batches; ++k) {
        datakit::SynthConfig cfg = stream;
        cfg.first_user = k * stream.users;
        stream_data.push_back(datakit::SynthGenerate(cfg));
      }
      source = {{"synth", stream.ToJson()}, {"batches", batches}};
    }
    MakeDir(output);
    const ordered_json snap = Snapshot("eval", {{"kind", "online"},
                                                {"output", output},
                                                {"stream", source},
                                                {"extractor", options.extractor.ToJson()},
                                                {"user_wise", options.hyper.ToJson()},
                                                {"train", options.train.ToJson()},
                                                {"train_session", train_session}});
    err << "online stream of " << stream_data.size() << " batches\n";
    datakit::PerturbationSet templates;
    evalkit::ExperimentReport report = evalkit::RunOnline(stream_data, options, &templates);
    for (const ordered_json& s : *report.steps) {
      err << "step " << s.at("step").get<int>() << ": users " << s.at("users").get<int>()
          << ", perturbed UIA " << s.at("perturbed").at("uia").get<double>();
      if (s.contains("clean")) err << ", clean UIA " << s.at("clean").at("uia").get<double>();
      err << "\n";
    }
    datakit::WritePerturbation(templates, fs::path(output) / "templates.eegdelta");
    Finish(report, snap, out, err);
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// inspect

ordered_json Histogram(const std::vector<int>& labels, int range) {
  std::vector<long> counts(static_cast<std::size_t>(std::max(range, 0)), 0);
  for (int v : labels) {
    if (v >= 0 && v < range) ++counts[static_cast<std::size_t>(v)];
  }
  return counts;
}

ordered_json InspectDataset(const datakit::Dataset& d) {
  double lo = 0.0, hi = 0.0;
  if (!d.data.empty()) {
    auto [mn, mx] = std::minmax_element(d.data.begin(), d.data.end());
    lo = *mn;
    hi = *mx;
  }
  return {{"type", "dataset"},
          {"N", d.size()},
          {"c", d.channels},
          {"t", d.samples},
          {"K", d.num_classes},
          {"U", d.num_users},
          {"S", d.num_sessions},
          {"task_histogram", Histogram(d.task_labels, d.num_classes)},
          {"user_histogram", Histogram(d.user_labels, d.num_users)},
          {"session_histogram", Histogram(d.session_labels, d.num_sessions)},
          {"min", lo},
          {"max", hi}};
}

ordered_json InspectPerturbation(const datakit::PerturbationSet& p) {
  ordered_json j = {{"type", "perturbation"},
                    {"mode", datakit::PerturbationModeName(p.mode)},
                    {"count", p.count()},
                    {"c", p.channels},
                    {"t", p.samples},
                    {"epsilon", p.epsilon},
                    {"max_abs", p.MaxAbs()}};
  const std::vector<double> norms = p.Norms();
  if (p.mode == datakit::PerturbationMode::kUserWise) {
    j["template_norms"] = norms;
  } else if (!norms.empty()) {
    double sum = 0.0;
    for (double n : norms) sum += n;
    j["norm_mean"] = sum / static_cast<double>(norms.size());
    j["norm_max"] = *std::max_element(norms.begin(), norms.end());
  }
  return j;
}

ordered_json InspectCheckpoint(const nets::SurrogateModels& m) {
  return {{"type", "checkpoint"},
          {"extractor", m.extractor.ToJson()},
          {"channels", m.channels},
          {"samples", m.samples},
          {"num_classes", m.num_classes},
          {"num_users", m.num_users},
          {"hidden", m.hidden},
          {"feature_dim", m.feature_dim()}};
}

void PrintText(const ordered_json& j, std::ostream& out) {
  for (const auto& [k, v] : j.items()) {
    out << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
}

struct InspectCommand {
  std::string path;
  bool json = false;

  int Run(std::ostream& out, std::ostream& /*err*/) {
    Usage(!path.empty(), "inspect: a file is required");
    const std::vector<std::uint8_t> bytes = datakit::ReadFileBytes(path);
    auto magic = [&](const char* m) {
      return bytes.size() >= 8 && std::memcmp(bytes.data(), m, 8) == 0;
    };
    ordered_json j;
    if (magic("EEGUNLRN")) {
      j = InspectDataset(datakit::DecodeDataset(bytes));
    } else if (magic("EEGDELTA")) {
      j = InspectPerturbation(datakit::DecodePerturbation(bytes));
    } else if (magic("EEGMODL1")) {
      j = InspectCheckpoint(nets::DecodeCheckpoint(bytes));
    } else {
      Fail(ErrorCode::kFormat, path + " is not a dataset, perturbation or checkpoint file");
    }
    if (json) {
      out << j.dump() << "\n";
    } else {
      PrintText(j, out);
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// Config files.

// Turns a JSON object into flag tokens. Values are placed before the command
// line arguments, and every option keeps its last value, so explicit flags
// win over the file.
std::vector<std::string> ConfigTokens(const fs::path& path) {
  std::ifstream in(path);
  Usage(static_cast<bool>(in), "cannot open config file " + path.string());
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file " + path.string() + ": " + e.what());
  }
  Usage(j.is_object(), "config file must hold a JSON object");
  std::vector<std::string> tokens;
  auto scalar = [](const ordered_json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      tokens.push_back(flag + "=" + (value.get<bool>() ? "true" : "false"));
    } else if (value.is_array()) {
      for (const ordered_json& v : value) {
        tokens.push_back(flag);
        tokens.push_back(scalar(v));
      }
    } else {
      Usage(!value.is_object() && !value.is_null(), "config key '" + key + "' must be a scalar");
      tokens.push_back(flag);
      tokens.push_back(scalar(value));
    }
  }
  return tokens;
}

std::vector<std::string> ExpandConfig(const std::vector<std::string>& args) {
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
  }
  if (config.empty()) return args;
  std::size_t lead = 0;
  while (lead < args.size() && !args[lead].empty() && args[lead][0] != '-') ++lead;
  std::vector<std::string> expanded(args.begin(), args.begin() + static_cast<long>(lead));
  const std::vector<std::string> tokens = ConfigTokens(config);
  expanded.insert(expanded.end(), tokens.begin(), tokens.end());
  expanded.insert(expanded.end(), args.begin() + static_cast<long>(lead), args.end());
  return expanded;
}

}  // namespace

int RunCli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Identity-unlearnable perturbations for EEG-like datasets", "eegshield"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string config_path;
  auto add_common = [&](CLI::App* sub, std::uint64_t* seed, int* threads, bool* json) {
    sub->add_option("--config", config_path, "JSON file of flag values");
    if (seed != nullptr) sub->add_option("--seed", *seed, "Random seed")->capture_default_str();
    if (threads != nullptr) {
      sub->add_option("--threads", *threads, "Worker threads (default EEGSHIELD_THREADS or 1)");
    }
    if (json != nullptr) sub->add_flag("--json", *json, "Print a JSON summary to stdout");
  };

  SynthCommand synth;
  CLI::App* synth_app = app.add_subcommand("synth", "Generate a synthetic dataset");
  AddSynthOptions(synth_app, synth.cfg);
  synth_app->add_option("-o,--output", synth.output, "Output dataset file");
  add_common(synth_app, &synth.cfg.seed, nullptr, &synth.json);

  ShieldCommand sh;
  CLI::App* shield_app = app.add_subcommand("shield", "Generate perturbations");
  shield_app->add_option("--mode", sh.mode, "sample or user");
  shield_app->add_option("-i,--input", sh.input, "Clean dataset file");
  shield_app->add_option("-o,--output", sh.output, "Output directory");
  shield_app->add_option("--extractor", sh.extractor, "Surrogate extractor preset")
      ->capture_default_str();
  shield_app->add_option("--preset", sh.preset, "Dataset preset for beta: mi1, mi2, p300, ern, "
                                                "ssvep, ns, tusz");
  shield_app->add_option("--beta", sh.beta, "User loss weight (default 0.1 or preset)");
  shield_app->add_option("--alpha", sh.user.alpha, "User loss weight in surrogate training")
      ->capture_default_str();
  shield_app->add_option("--epsilon", sh.epsilon, "l-infinity radius")->capture_default_str();
  shield_app->add_option("--eta", sh.eta, "Step size")->capture_default_str();
  shield_app->add_option("--n-iter", sh.n_iter, "Steps per update")->capture_default_str();
  shield_app->add_option("--L", sh.L, "Surrogate epochs per round")->capture_default_str();
  shield_app->add_option("--M", sh.M, "Rounds")->capture_default_str();
  shield_app->add_option("--task-match", sh.task_match, "logits or probabilities")
      ->capture_default_str();
  shield_app->add_flag("--cold-start", sh.cold_start, "Restart deltas every round");
  shield_app->add_flag("--reinit-models", sh.reinit_models, "Fresh surrogates every round");
  AddUserOptions(shield_app, sh.user, false);
  AddTrainOptions(shield_app, sh.train);
  add_common(shield_app, &sh.seed, &sh.threads, &sh.json);

  EvalCommand ev;
  CLI::App* eval_app = app.add_subcommand("eval", "Evaluate identity leakage");
  eval_app->require_subcommand(1);
  CLI::App* loso_app = eval_app->add_subcommand("loso", "Leave-one-session-out evaluation");
  CLI::App* transfer_app =
      eval_app->add_subcommand("transfer", "Evaluate with a different extractor");
  CLI::App* online_app = eval_app->add_subcommand("online", "Online stream of new users");
  for (CLI::App* sub : {loso_app, transfer_app}) {
    sub->add_option("--clean", ev.clean, "Clean dataset file");
    sub->add_option("--perturbed", ev.perturbed, "Perturbed dataset file");
    sub->add_option("--repeats", ev.repeats, "Repeats per session")->capture_default_str();
    sub->add_option("--condition", ev.condition, "Report label");
    sub->add_option("--baseline", ev.baseline, "Clean report.json to pair with");
    sub->add_flag("--perturb-test", ev.perturb_test, "Test on perturbed sessions");
    sub->add_flag("--curves", ev.curves, "Record per-epoch curves");
  }
  loso_app->add_option("--extractor", ev.extractor, "Extractor preset")->capture_default_str();
  transfer_app->add_option("--craft-cfg", ev.craft_cfg, "Extractor used for crafting")
      ->capture_default_str();
  transfer_app->add_option("--eval-cfg", ev.eval_cfg, "Extractor used for evaluation")
      ->capture_default_str();
  online_app->add_option("--extractor", ev.extractor, "Extractor preset")->capture_default_str();
  online_app->add_option("--batches", ev.batches, "Synthetic batches")->capture_default_str();
  online_app->add_option("--batch", ev.batch_files, "Dataset file of one batch, in order")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  online_app->add_option("--train-session", ev.train_session, "Training session")
      ->capture_default_str();
  online_app->add_option("--preset", ev.preset, "Dataset preset for beta");
  online_app->add_option("--beta", ev.beta, "User loss weight (default 0.1 or preset)");
  online_app->add_option("--alpha", ev.user.alpha, "User loss weight in surrogate training")
      ->capture_default_str();
  online_app->add_option("--surrogate-lr", ev.surrogate.lr, "Surrogate learning rate")
      ->capture_default_str();
  ev.stream.users = 10;
  AddSynthOptions(online_app, ev.stream);
  AddUserOptions(online_app, ev.user, false);
  for (CLI::App* sub : {loso_app, transfer_app, online_app}) {
    sub->add_option("-o,--output", ev.output, "Output directory");
    AddEvalTrainOptions(sub, ev.eval);
    add_common(sub, &ev.seed, &ev.threads, &ev.json);
  }

  InspectCommand ins;
  CLI::App* inspect_app = app.add_subcommand("inspect", "Summarize a file");
  inspect_app->add_option("file", ins.path, "Dataset, perturbation or checkpoint file");
  add_common(inspect_app, nullptr, nullptr, &ins.json);

  std::vector<std::string> args;
  try {
    args = ExpandConfig(raw_args);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::vector<const char*> argv = {"eegshield"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  ev.stream.seed = ev.seed;

  try {
    if (synth_app->parsed()) return synth.Run(out, err);
    if (shield_app->parsed()) return sh.Run(out, err);
    if (loso_app->parsed()) {
      ev.kind = "loso";
      return ev.RunLoso(out, err, false);
    }
    if (transfer_app->parsed()) {
      ev.kind = "transfer";
      return ev.RunLoso(out, err, true);
    }
    if (online_app->parsed()) {
      ev.kind = "online";
      return ev.RunOnline(out, err);
    }
    if (inspect_app->parsed()) return ins.Run(out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\nrun with --help for usage\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace eegshield::cli
