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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Arguments select a subset by number.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "eegshield/common/error.h"
#include "eegshield/common/random.h"
#include "eegshield/datakit/io.h"
#include "eegshield/datakit/perturbation.h"
#include "eegshield/datakit/synth.h"
#include "eegshield/evalkit/experiment.h"
#include "eegshield/evalkit/metrics.h"
#include "eegshield/evalkit/online.h"
#include "eegshield/evalkit/report.h"
#include "eegshield/nets/models.h"
#include "eegshield/nets/train.h"
#include "eegshield/numerics/ops.h"
#include "eegshield/shield/objective.h"
#include "eegshield/shield/sample_wise.h"
#include "eegshield/shield/user_wise.h"
#include "gradcheck.h"

namespace eegshield::acceptance {
namespace {

namespace fs = std::filesystem;
using datakit::Dataset;
using numerics::Graph;
using numerics::Tensor;
using numerics::Var;

// Tolerances and thresholds.
constexpr int kGradSeeds = 100;
constexpr double kGradStep = 1e-5;
constexpr double kGradTolerance = 1e-4;
constexpr double kGradBudgetSeconds = 60.0;
constexpr int kMetricCases = 1000;
constexpr double kHandCaseBca = 0.875;
constexpr double kCleanUiaMin = 0.50;
constexpr double kCleanBcaMin = 0.80;
constexpr double kUiaDropMin = 0.30;
constexpr double kBcaDropMax = 0.05;
constexpr double kUnlearnableBudgetSeconds = 600.0;
constexpr double kTransferDropMin = 0.20;
constexpr int kOnlineBatches = 4;
constexpr int kOnlineUsersPerBatch = 10;
constexpr double kOnlineChanceFactor = 2.0;
constexpr double kOnlineCleanUiaMin = 0.50;
constexpr double kOnlineBudgetSeconds = 900.0;
constexpr double kNoIdentityChanceFactor = 2.0;
constexpr int kRepeats = 5;

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double a = 0, double b = 0, double c = 0, double d = 0,
                double e = 0, double f = 0) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d, e, f);
  return buf;
}

// ---------------------------------------------------------------------------
// Shared state, computed on first use.

struct Shared {
  std::optional<Dataset> reference;
  std::optional<evalkit::ExperimentReport> clean_a;
  std::optional<Dataset> sample_wise;
  double sample_wise_seconds = 0.0;
  double clean_a_seconds = 0.0;

  const Dataset& Reference() {
    if (!reference) reference = datakit::SynthGenerate(datakit::ReferenceSynthConfig());
    return *reference;
  }

  evalkit::EvalOptions Eval(const std::string& condition) const {
    evalkit::EvalOptions o;
    o.repeats = kRepeats;
    o.condition = condition;
    return o;
  }

  const evalkit::ExperimentReport& CleanA() {
    if (!clean_a) {
      const auto start = Clock::now();
      clean_a = evalkit::RunLoso(Reference(), nullptr, nets::ExtractorPreset("cfgA"),
                                 Eval("clean"));
      clean_a_seconds = Seconds(start);
    }
    return *clean_a;
  }

  const Dataset& SampleWise() {
    if (!sample_wise) {
      const auto start = Clock::now();
      shield::SampleHyper h;
      sample_wise = shield::GenerateSampleWise(Reference(), nets::ExtractorPreset("cfgA"), h)
                        .perturbed;
      sample_wise_seconds = Seconds(start);
    }
    return *sample_wise;
  }
};

// ---------------------------------------------------------------------------
// 1. Gradients.

using testing::GradCheck;
using testing::LossBuilder;

Tensor Random(numerics::Shape shape, Rng& rng, double scale = 1.0) {
  Tensor t(std::move(shape));
  for (double& v : t.data()) v = rng.Uniform(-scale, scale);
  return t;
}

Tensor AwayFromZero(numerics::Shape shape, Rng& rng) {
  Tensor t(std::move(shape));
  for (double& v : t.data()) v = (rng.Uniform() < 0.5 ? -1.0 : 1.0) * rng.Uniform(0.1, 1.0);
  return t;
}

Var Project(Var y, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = y.value().size();
  Var w = y.graph->Constant(Random({n, 1}, rng));
  return numerics::Sum(numerics::MatMul(numerics::Reshape(y, {1, n}), w));
}

LossBuilder UnaryOp(std::function<Var(Var)> op, std::uint64_t seed) {
  return [op, seed](Graph& g, const std::vector<Tensor>& p, std::vector<Var>& wrt) {
    wrt.push_back(g.Param(p[0]));
    return Project(op(wrt[0]), seed);
  };
}

LossBuilder BinaryOp(std::function<Var(Var, Var)> op, std::uint64_t seed) {
  return [op, seed](Graph& g, const std::vector<Tensor>& p, std::vector<Var>& wrt) {
    wrt.push_back(g.Param(p[0]));
    wrt.push_back(g.Param(p[1]));
    return Project(op(wrt[0], wrt[1]), seed);
  };
}

nets::ExtractorConfig ToyExtractor() {
  nets::ExtractorConfig cfg;
  cfg.name = "toy";
  cfg.temporal_filters = 2;
  cfg.temporal_kernel = 5;
  cfg.spatial_filters = 3;
  cfg.pool_window = 4;
  cfg.pool_stride = 2;
  return cfg;
}

// Smallest |pre-activation| of the user head's relu over a batch. Central
// differences are meaningless across a kink, so points closer than
// kKinkMargin are redrawn.
constexpr double kKinkMargin = 1e-3;

double ReluMargin(const nets::SurrogateModels& m, const Tensor& batch) {
  const Tensor f = nets::Forward(m, batch).features;
  const std::size_t n = f.dim(0), dim = f.dim(1), h = m.user_bias1.size();
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < h; ++j) {
      double pre = m.user_bias1[j];
      for (std::size_t k = 0; k < dim; ++k) pre += f[i * dim + k] * m.user_weight1[k * h + j];
      margin = std::min(margin, std::abs(pre));
    }
  }
  return margin;
}

int redrawn_points = 0;

struct NamedCheck {
  std::string name;
  LossBuilder build;
  std::vector<Tensor> point;
};

std::vector<NamedCheck> GradCases(std::uint64_t seed) {
  Rng rng(MixSeed(seed, 1));
  using namespace numerics;
  std::vector<NamedCheck> cases;
  cases.push_back({"MatMul", BinaryOp([](Var a, Var b) { return MatMul(a, b); }, seed),
                   {Random({3, 4}, rng), Random({4, 2}, rng)}});
  cases.push_back({"AddBias", BinaryOp([](Var a, Var b) { return AddBias(a, b); }, seed),
                   {Random({3, 4}, rng), Random({4}, rng)}});
  cases.push_back({"Add", BinaryOp([](Var a, Var b) { return Add(a, b); }, seed),
                   {Random({2, 3}, rng), Random({2, 3}, rng)}});
  cases.push_back({"Scale", UnaryOp([](Var a) { return Scale(a, -1.7); }, seed), {Random({4}, rng)}});
  cases.push_back({"Sum", UnaryOp([](Var a) { return Scale(Sum(a), 0.3); }, seed), {Random({5}, rng)}});
  cases.push_back({"Flatten", UnaryOp([](Var a) { return Flatten(a); }, seed), {Random({2, 2, 16}, rng)}});
  cases.push_back({"ConvTemporal",
                   BinaryOp([](Var x, Var k) { return ConvTemporal(x, k, 2); }, seed),
                   {Random({2, 2, 16}, rng), Random({2, 1, 5}, rng)}});
  cases.push_back({"ConvSpatial", BinaryOp([](Var x, Var w) { return ConvSpatial(x, w); }, seed),
                   {Random({2, 4, 12}, rng), Random({3, 4}, rng)}});
  cases.push_back({"Conv1d", BinaryOp([](Var x, Var k) { return Conv1d(x, k); }, seed),
                   {Random({2, 2, 16}, rng), Random({3, 2, 5}, rng)}});
  for (ActivationKind kind : {ActivationKind::kRelu, ActivationKind::kElu, ActivationKind::kSquare}) {
    cases.push_back({"Activation:" + std::string(ActivationName(kind)),
                     UnaryOp([kind](Var x) { return Activation(x, kind); }, seed),
                     {AwayFromZero({2, 3, 4}, rng)}});
  }
  cases.push_back({"MeanPoolTime", UnaryOp([](Var x) { return MeanPoolTime(x, 4, 2); }, seed),
                   {Random({2, 3, 16}, rng)}});
  cases.push_back({"Softmax", UnaryOp([](Var x) { return Softmax(x); }, seed),
                   {Random({3, 4}, rng, 3.0)}});
  std::vector<int> labels = {0, 2, 1};
  cases.push_back({"SoftmaxCrossEntropy",
                   [labels](Graph& g, const std::vector<Tensor>& p, std::vector<Var>& wrt) {
                     wrt.push_back(g.Param(p[0]));
                     return SoftmaxCrossEntropy(wrt[0], labels);
                   },
                   {Random({3, 3}, rng, 3.0)}});
  cases.push_back({"Mse",
                   [](Graph& g, const std::vector<Tensor>& p, std::vector<Var>& wrt) {
                     wrt.push_back(g.Param(p[0]));
                     wrt.push_back(g.Param(p[1]));
                     return Mse(wrt[0], wrt[1]);
                   },
                   {Random({3, 2}, rng), Random({3, 2}, rng)}});
  std::vector<int> rows = {1, 0, 1};
  cases.push_back({"GatherRows", UnaryOp([rows](Var t) { return GatherRows(t, rows); }, seed),
                   {Random({2, 5}, rng)}});
  cases.push_back({"RowL2Norm", UnaryOp([](Var x) { return RowL2Norm(x); }, seed),
                   {AwayFromZero({3, 4}, rng)}});

  // Full objectives on a 2-channel x 16-sample toy model.
  const int users = 3, classes = 2, batch = 4;
  const nets::SurrogateModels base =
      nets::SurrogateModels::Create(ToyExtractor(), 2, 16, classes, users, 4, MixSeed(seed, 2));
  Tensor x = Random({batch, 2, 16}, rng);
  while (ReluMargin(base, x) < kKinkMargin) {
    ++redrawn_points;
    x = Random({batch, 2, 16}, rng);
  }
  // Redraws perturbations until x + delta keeps the margin.
  auto smooth_delta = [&](double scale) {
    for (;;) {
      Tensor delta = Random({batch, 2, 16}, rng, scale);
      Tensor p = x;
      for (std::size_t i = 0; i < p.size(); ++i) p[i] += delta[i];
      if (ReluMargin(base, p) >= kKinkMargin) return delta;
      ++redrawn_points;
    }
  };
  std::vector<int> y(batch), u(batch);
  for (int i = 0; i < batch; ++i) {
    y[i] = static_cast<int>(rng.Below(classes));
    u[i] = static_cast<int>(rng.Below(users));
  }
  std::vector<Tensor> params;
  for (const Tensor* t : base.Parameters()) params.push_back(*t);
  const double alpha = rng.Uniform(0.05, 1.0);
  cases.push_back({"JointTraining",
                   [=](Graph& g, const std::vector<Tensor>& p, std::vector<Var>& wrt) {
                     nets::SurrogateModels m = base;
                     auto slots = m.Parameters();
                     for (std::size_t i = 0; i < slots.size(); ++i) *slots[i] = p[i];
                     const nets::BoundModels b = nets::Bind(g, m, nets::kAllParams);
                     wrt = b.All();
                     Var f = nets::Features(m, b, g.Constant(x));
                     return Add(SoftmaxCrossEntropy(nets::TaskLogits(b, f), y),
                                Scale(SoftmaxCrossEntropy(nets::UserLogits(b, f), u), alpha));
                   },
                   params});
  const double beta = rng.Uniform(0.05, 1.0);
  for (shield::TaskMatch match : {shield::TaskMatch::kLogits, shield::TaskMatch::kProbabilities}) {
    const Tensor target = shield::CleanTaskTarget(base, x, match);
    cases.push_back({"SampleObjective:" + std::string(shield::TaskMatchName(match)),
                     [=](Graph& g, const std::vector<Tensor>& p, std::vector<Var>& wrt) {
                       const nets::BoundModels b = nets::Bind(g, base, nets::kNoParams);
                       Var delta = g.Param(p[0]);
                       wrt.push_back(delta);
                       return shield::PerturbationObjectiveSum(
                           base, b, Add(g.Constant(x), delta), target, u, beta, match);
                     },
                     {smooth_delta(0.05)}});
  }
  const Tensor target = shield::CleanTaskTarget(base, x, shield::TaskMatch::kLogits);
  const double gamma = rng.Uniform(0.01, 1.0);
  cases.push_back({"UserObjective",
                   [=](Graph& g, const std::vector<Tensor>& p, std::vector<Var>& wrt) {
                     const nets::BoundModels b = nets::Bind(g, base, nets::kNoParams);
                     wrt.push_back(g.Param(p[0]));
                     return shield::UserObjective(base, b, wrt[0], x, target, u, beta, gamma,
                                                  shield::TaskMatch::kLogits);
                   },
                   {[&] {
                     for (;;) {
                       Tensor t = AwayFromZero({static_cast<std::size_t>(users), 32}, rng);
                       Tensor p = x;
                       for (std::size_t i = 0; i < p.size(); ++i) {
                         p[i] += t[static_cast<std::size_t>(u[i / 32]) * 32 + i % 32];
                       }
                       if (ReluMargin(base, p) >= kKinkMargin) return t;
                       ++redrawn_points;
                     }
                   }()}});
  return cases;
}

Outcome Gradients(Shared&) {
  const auto start = Clock::now();
  double worst = 0.0;
  std::string worst_name;
  int checks = 0;
  for (int s = 0; s < kGradSeeds; ++s) {
    for (const NamedCheck& c : GradCases(static_cast<std::uint64_t>(s))) {
      const auto r = GradCheck(c.build, c.point, kGradStep);
      ++checks;
      if (r.max_relative_error > worst || !std::isfinite(r.max_relative_error)) {
        worst = r.max_relative_error;
        worst_name = c.name + " seed " + std::to_string(s);
      }
    }
  }
  const double secs = Seconds(start);
  Outcome o;
  o.pass = worst <= kGradTolerance && secs <= kGradBudgetSeconds;
  o.detail = Fmt("%.0f checks, max relative error %.3g (tolerance %.0e), %.1f s", checks, worst,
                 kGradTolerance, secs) +
             ", worst " + worst_name + ", " + std::to_string(redrawn_points) +
             " points redrawn away from relu kinks";
  return o;
}

// ---------------------------------------------------------------------------
// 2. Metric oracles.

Outcome Metrics(Shared&) {
  Rng rng(2024);
  int mismatches = 0;
  for (int t = 0; t < kMetricCases; ++t) {
    const int k = 1 + static_cast<int>(rng.Below(6));
    const std::size_t n = 1 + rng.Below(60);
    std::vector<int> pred(n), labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = static_cast<int>(rng.Below(k));
      pred[i] = static_cast<int>(rng.Below(k));
    }
    std::vector<long> total(k, 0), hit(k, 0);
    long correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
      ++total[labels[i]];
      hit[labels[i]] += pred[i] == labels[i];
      correct += pred[i] == labels[i];
    }
    double sum = 0.0;
    int present = 0;
    for (int c = 0; c < k; ++c) {
      if (total[c] == 0) continue;
      sum += static_cast<double>(hit[c]) / static_cast<double>(total[c]);
      ++present;
    }
    if (evalkit::Bca(pred, labels, k) != sum / present) ++mismatches;
    if (evalkit::Uia(pred, labels) != static_cast<double>(correct) / static_cast<double>(n)) {
      ++mismatches;
    }
  }
  const double hand = evalkit::Bca(std::vector<int>{0, 0, 1, 1, 1}, std::vector<int>{0, 1, 1, 1, 1}, 2);
  Outcome o;
  o.pass = mismatches == 0 && hand == kHandCaseBca;
  o.detail = Fmt("%.0f random instances, %.0f mismatches, hand case %.6g (expected %.3f)",
                 kMetricCases, mismatches, hand, kHandCaseBca);
  return o;
}

// ---------------------------------------------------------------------------
// 3. l-infinity contract.

Outcome LinfContract(Shared& shared) {
  const Dataset& d = shared.Reference();
  shield::SampleHyper h;
  int rounds = 0, violations = 0;
  double worst = 0.0;
  const auto start = Clock::now();
  const shield::SampleWiseResult r = shield::GenerateSampleWise(
      d, nets::ExtractorPreset("cfgA"), h,
      [&](const shield::SampleRound&, const datakit::PerturbationSet& p) {
        ++rounds;
        for (double v : p.deltas) {
          if (!(std::abs(v) <= h.epsilon)) ++violations;
        }
        worst = std::max(worst, p.MaxAbs());
      });
  for (double v : r.perturbation.deltas) {
    if (!(std::abs(v) <= h.epsilon)) ++violations;
  }
  if (!shared.sample_wise) {
    shared.sample_wise = r.perturbed;
    shared.sample_wise_seconds = Seconds(start);
  }
  Outcome o;
  o.pass = rounds == h.M && violations == 0;
  o.detail = Fmt("%.0f rounds on %.0f trials, max |delta| %.9g (epsilon %.3g), %.0f violations",
                 rounds, static_cast<double>(d.size()), worst, h.epsilon, violations);
  return o;
}

// ---------------------------------------------------------------------------
// 4 and 5. Unlearnability on the reference dataset.

Outcome CompareToClean(const evalkit::ExperimentReport& clean,
                       const evalkit::ExperimentReport& pert, double seconds) {
  const auto& c = clean.aggregate;
  const auto& p = pert.aggregate;
  Outcome o;
  o.pass = c.uia_mean >= kCleanUiaMin && c.bca_mean >= kCleanBcaMin &&
           p.uia_mean <= c.uia_mean - kUiaDropMin && p.bca_mean >= c.bca_mean - kBcaDropMax &&
           seconds <= kUnlearnableBudgetSeconds;
  o.detail = Fmt("clean UIA %.3f BCA %.3f; perturbed UIA %.3f BCA %.3f; ", c.uia_mean,
                 c.bca_mean, p.uia_mean, p.bca_mean) +
             Fmt("need UIA <= %.3f, BCA >= %.3f; %.0f s", c.uia_mean - kUiaDropMin,
                 c.bca_mean - kBcaDropMax, seconds);
  return o;
}

Outcome SampleWiseUnlearnable(Shared& shared) {
  const evalkit::ExperimentReport& clean = shared.CleanA();
  const Dataset& pert = shared.SampleWise();
  const auto start = Clock::now();
  const evalkit::ExperimentReport r = evalkit::RunLoso(
      shared.Reference(), &pert, nets::ExtractorPreset("cfgA"), shared.Eval("sample_wise"));
  return CompareToClean(clean, r,
                        shared.clean_a_seconds + shared.sample_wise_seconds + Seconds(start));
}

Outcome UserWiseUnlearnable(Shared& shared) {
  const evalkit::ExperimentReport& clean = shared.CleanA();
  const auto start = Clock::now();
  const shield::UserWiseResult u =
      shield::GenerateUserWise(shared.Reference(), nets::ExtractorPreset("cfgA"), shield::UserHyper());
  const evalkit::ExperimentReport r = evalkit::RunLoso(
      shared.Reference(), &u.perturbed, nets::ExtractorPreset("cfgA"), shared.Eval("user_wise"));
  return CompareToClean(clean, r, shared.clean_a_seconds + Seconds(start));
}

// ---------------------------------------------------------------------------
// 6. Transfer from cfgA to cfgB.

Outcome Transfer(Shared& shared) {
  const nets::ExtractorConfig a = nets::ExtractorPreset("cfgA");
  const nets::ExtractorConfig b = nets::ExtractorPreset("cfgB");
  const Dataset& pert = shared.SampleWise();
  const auto clean =
      evalkit::RunTransfer(shared.Reference(), nullptr, a, b, shared.Eval("clean"));
  const auto transfer =
      evalkit::RunTransfer(shared.Reference(), &pert, a, b, shared.Eval("sample_wise"));
  const double drop = clean.aggregate.uia_mean - transfer.aggregate.uia_mean;
  Outcome o;
  o.pass = drop >= kTransferDropMin;
  o.detail = Fmt("cfgB clean UIA %.3f, cfgA-crafted perturbed UIA %.3f, drop %.3f (need >= %.2f)",
                 clean.aggregate.uia_mean, transfer.aggregate.uia_mean, drop, kTransferDropMin);
  return o;
}

// ---------------------------------------------------------------------------
// 7. Online stream.

Outcome Online(Shared&) {
  const auto start = Clock::now();
  std::vector<Dataset> batches;
  for (int k = 0; k < kOnlineBatches; ++k) {
    datakit::SynthConfig cfg = datakit::ReferenceSynthConfig();
    cfg.users = kOnlineUsersPerBatch;
    cfg.first_user = k * kOnlineUsersPerBatch;
    cfg.seed = MixSeed(cfg.seed, 500 + static_cast<std::uint64_t>(k));
    batches.push_back(datakit::SynthGenerate(cfg));
  }
  evalkit::OnlineOptions options;
  options.extractor = nets::ExtractorPreset("cfgA");
  const evalkit::ExperimentReport r = evalkit::RunOnline(batches, options);
  const double secs = Seconds(start);
  bool pass = secs <= kOnlineBudgetSeconds;
  std::string detail;
  for (const auto& step : *r.steps) {
    const double chance = step.at("chance").get<double>();
    const double pu = step.at("perturbed").at("uia").get<double>();
    const double cu = step.at("clean").at("uia").get<double>();
    pass = pass && pu <= kOnlineChanceFactor * chance && cu > kOnlineCleanUiaMin;
    detail += Fmt("step %.0f: %.0f users, perturbed UIA %.3f (limit %.3f), clean UIA %.3f; ",
                  step.at("step").get<double>(), step.at("users").get<double>(), pu,
                  kOnlineChanceFactor * chance, cu);
  }
  Outcome o;
  o.pass = pass;
  o.detail = detail + Fmt("%.0f s", secs);
  return o;
}

// ---------------------------------------------------------------------------
// 8. Determinism and formats.

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int Cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::RunCli(args, out, err);
  if (code != cli::kExitOk) std::cerr << err.str();
  return code;
}

Outcome Determinism(Shared& shared) {
  const fs::path root = fs::temp_directory_path() / "eegshield_acceptance_determinism";
  fs::remove_all(root);
  std::vector<std::string> problems;
  for (const char* run : {"a", "b"}) {
    const fs::path dir = root / run;
    const std::string data = (dir / "data.eegu").string();
    bool ok = Cli({"synth", "-o", data, "--seed", "3"}) == 0;
    ok = ok && Cli({"shield", "--mode", "sample", "-i", data, "-o", (dir / "sample").string(),
                    "--M", "2", "--L", "1", "--threads", "1", "--seed", "4"}) == 0;
    ok = ok && Cli({"shield", "--mode", "user", "-i", data, "-o", (dir / "user").string(),
                    "--m-model", "3", "--m-pert", "3", "--seed", "4"}) == 0;
    ok = ok && Cli({"eval", "loso", "--clean", data, "--perturbed",
                    (dir / "user" / "perturbed.eegu").string(), "-o", (dir / "eval").string(),
                    "--repeats", "1", "--epochs", "3", "--user-head-epochs", "3", "--curves",
                    "--threads", "1"}) == 0;
    if (!ok) problems.push_back(std::string("run ") + run + " failed");
  }
  for (const char* f : {"data.eegu", "sample/perturbation.eegdelta", "sample/perturbed.eegu",
                        "user/perturbation.eegdelta", "user/perturbed.eegu", "eval/report.json",
                        "eval/curves.csv"}) {
    const std::string a = Slurp(root / "a" / f);
    if (a.empty() || a != Slurp(root / "b" / f)) problems.push_back(std::string(f) + " differs");
  }

  // Bit-exact round trips of values already in single precision.
  const Dataset d = datakit::DecodeDataset(datakit::EncodeDataset(shared.Reference()));
  if (!(datakit::DecodeDataset(datakit::EncodeDataset(d)) == d)) problems.push_back("EEGU round trip");
  const datakit::PerturbationSet p = datakit::ReadPerturbation(root / "a" / "sample" / "perturbation.eegdelta");
  if (datakit::DecodePerturbation(datakit::EncodePerturbation(p)).deltas != p.deltas) {
    problems.push_back("EEGDELTA round trip");
  }

  // Every single-bit flip in a sample of positions must be rejected.
  int undetected = 0;
  const std::vector<std::uint8_t> bytes = datakit::EncodeDataset(d);
  const std::vector<std::uint8_t> dbytes = datakit::EncodePerturbation(p);
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    const bool dataset = t % 2 == 0;
    std::vector<std::uint8_t> b = dataset ? bytes : dbytes;
    const std::size_t header = dataset ? 36 : 32;
    b[header + rng.Below(b.size() - header)] ^= static_cast<std::uint8_t>(1u << rng.Below(8));
    try {
      if (dataset) {
        datakit::DecodeDataset(b);
      } else {
        datakit::DecodePerturbation(b);
      }
      ++undetected;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kCorruption) ++undetected;
    }
  }
  if (undetected > 0) problems.push_back(std::to_string(undetected) + " corruptions accepted");
  fs::remove_all(root);

  Outcome o;
  o.pass = problems.empty();
  o.detail = "7 artifact pairs compared, round trips checked, 200 bit flips";
  for (const std::string& s : problems) o.detail += "; " + s;
  return o;
}

// ---------------------------------------------------------------------------
// 9. Degenerate controls.

Outcome Degenerate(Shared& shared) {
  std::vector<std::string> problems;
  std::string detail;

  datakit::SynthConfig no_id = datakit::ReferenceSynthConfig();
  no_id.identity_amplitude = 0.0;
  evalkit::EvalOptions once;
  once.repeats = 1;
  const auto r0 = evalkit::RunLoso(datakit::SynthGenerate(no_id), nullptr,
                                   nets::ExtractorPreset("cfgA"), once);
  const double chance = 1.0 / no_id.users;
  detail += Fmt("no-identity UIA %.3f (limit %.3f)", r0.aggregate.uia_mean,
                kNoIdentityChanceFactor * chance);
  if (r0.aggregate.uia_mean > kNoIdentityChanceFactor * chance) problems.push_back("identity leaked");

  const Dataset& d = shared.Reference();
  shield::SampleHyper zero;
  zero.epsilon = 0.0;
  zero.M = 2;
  zero.L = 1;
  const shield::SampleWiseResult z = shield::GenerateSampleWise(d, nets::ExtractorPreset("cfgA"), zero);
  if (!(z.perturbed == d)) problems.push_back("epsilon=0 changed the data");
  evalkit::EvalOptions fast = once;
  fast.train.epochs = 20;
  fast.train.user_head_epochs = 20;
  const auto clean_r = evalkit::RunLoso(d, nullptr, nets::ExtractorPreset("cfgA"), fast);
  const auto zero_r = evalkit::RunLoso(d, &z.perturbed, nets::ExtractorPreset("cfgA"), fast);
  if (clean_r.folds != zero_r.folds) problems.push_back("epsilon=0 report differs");

  nets::TrainConfig cfg;
  cfg.alpha = 0.0;
  cfg.seed = 9;
  const nets::SurrogateModels init = nets::SurrogateModels::Create(
      nets::ExtractorPreset("cfgA"), d.channels, d.samples, d.num_classes, d.num_users,
      cfg.hidden, 9);
  nets::JointTrainer joint(init, cfg, nets::Objective::kJoint);
  nets::JointTrainer task(init, cfg, nets::Objective::kTaskOnly);
  for (int e = 0; e < 5; ++e) {
    if (joint.RunEpoch(d) != task.RunEpoch(d)) problems.push_back("alpha=0 loss differs");
  }
  const auto a = joint.models().Parameters();
  const auto b = task.models().Parameters();
  for (std::size_t i = 0; i < 4; ++i) {
    if (!(*a[i] == *b[i])) problems.push_back("alpha=0 parameters differ");
  }
  detail += "; epsilon=0 data and reports compared; alpha=0 checked over 5 epochs";

  Outcome o;
  o.pass = problems.empty();
  o.detail = detail;
  for (const std::string& s : problems) o.detail += "; " + s;
  return o;
}

struct Criterion {
  int number;
  const char* name;
  Outcome (*run)(Shared&);
};

int Main(int argc, char** argv) {
  const Criterion criteria[] = {
      {1, "gradient correctness", Gradients},
      {2, "metric oracles", Metrics},
      {3, "l-infinity contract", LinfContract},
      {4, "sample-wise identity unlearnability", SampleWiseUnlearnable},
      {5, "user-wise identity unlearnability", UserWiseUnlearnable},
      {6, "transfer cfgA -> cfgB", Transfer},
      {7, "online stream", Online},
      {8, "determinism and formats", Determinism},
      {9, "degenerate controls", Degenerate},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

  Shared shared;
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.number)) continue;
    Outcome o;
    try {
      o = c.run(shared);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::cout << "criterion " << c.number << " " << (o.pass ? "PASS" : "FAIL") << ": " << c.name
              << " | " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace eegshield::acceptance

int main(int argc, char** argv) { return eegshield::acceptance::Main(argc, argv); }
