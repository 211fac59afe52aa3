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

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "eegshield/common/random.h"
#include "eegshield/numerics/graph.h"
#include "eegshield/numerics/ops.h"
#include "eegshield/numerics/tensor.h"
#include "expect_error.h"
#include "gradcheck.h"

namespace eegshield::numerics {
namespace {

using testing::GradCheck;
using testing::LossBuilder;

constexpr double kGradTolerance = 1e-6;

Tensor RandomTensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  for (double& v : t.data()) v = rng.Uniform(lo, hi);
  return t;
}

// Random values with magnitude in [0.1, 1]; keeps kinks out of reach of the
// finite-difference step.
Tensor AwayFromZero(Shape shape, Rng& rng) {
  Tensor t(std::move(shape));
  for (double& v : t.data()) {
    const double m = rng.Uniform(0.1, 1.0);
    v = rng.Uniform() < 0.5 ? -m : m;
  }
  return t;
}

// Contracts an arbitrary output with fixed random weights so every output
// element contributes to the checked scalar.
Var Project(Var y, std::uint64_t seed) {
  Rng rng(seed);
  Tensor w = RandomTensor(y.value().shape(), rng);
  Graph& g = *y.graph;
  Var wv = g.Constant(w);
  Var flat_y = Reshape(y, {1, y.value().size()});
  Var flat_w = Reshape(wv, {y.value().size(), 1});
  return Sum(MatMul(flat_y, flat_w));
}

LossBuilder Unary(std::function<Var(Var)> op) {
  return [op](Graph& g, const std::vector<Tensor>& p, std::vector<Var>& wrt) {
    wrt.push_back(g.Param(p[0]));
    return Project(op(wrt[0]), 99);
  };
}

LossBuilder Binary(std::function<Var(Var, Var)> op) {
  return [op](Graph& g, const std::vector<Tensor>& p, std::vector<Var>& wrt) {
    wrt.push_back(g.Param(p[0]));
    wrt.push_back(g.Param(p[1]));
    return Project(op(wrt[0], wrt[1]), 77);
  };
}

void ExpectGradOk(const LossBuilder& f, const std::vector<Tensor>& point) {
  const auto r = GradCheck(f, point);
  EXPECT_LE(r.max_relative_error, kGradTolerance);
  EXPECT_GT(r.max_gradient_norm, 0.0);
}

TEST(TensorTest, ShapesAndAccessors) {
  Tensor t({2, 3});
  EXPECT_EQ(t.size(), 6u);
  EXPECT_EQ(t.rank(), 2u);
  EXPECT_EQ(ShapeString(t.shape()), "[2x3]");
  t[4] = -3.5;
  EXPECT_EQ(t.MaxAbs(), 3.5);
  EXPECT_TRUE(t.AllFinite());
  t[0] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(t.AllFinite());
  EXPECT_EQ(Tensor::Scalar(2.0).item(), 2.0);
  EXPECT_ERROR_CODE(t.item(), ErrorCode::kContract);
  EXPECT_ERROR_CODE(t.Reshaped({4}), ErrorCode::kDimension);
  EXPECT_EQ(Tensor::Identity(2).storage(), (std::vector<double>{1, 0, 0, 1}));
}

TEST(OpsGradientTest, MatMul) {
  Rng rng(1);
  ExpectGradOk(Binary([](Var a, Var b) { return MatMul(a, b); }),
               {RandomTensor({3, 4}, rng), RandomTensor({4, 5}, rng)});
}

TEST(OpsGradientTest, AddBiasAddScale) {
  Rng rng(2);
  ExpectGradOk(Binary([](Var a, Var b) { return AddBias(a, b); }),
               {RandomTensor({3, 4}, rng), RandomTensor({4}, rng)});
  ExpectGradOk(Binary([](Var a, Var b) { return Add(a, b); }),
               {RandomTensor({2, 3}, rng), RandomTensor({2, 3}, rng)});
  ExpectGradOk(Unary([](Var a) { return Scale(a, -2.5); }), {RandomTensor({5}, rng)});
  ExpectGradOk(Unary([](Var a) { return Flatten(a); }), {RandomTensor({2, 3, 4}, rng)});
}

TEST(OpsGradientTest, ConvTemporal) {
  Rng rng(3);
  for (std::size_t stride : {1u, 2u, 3u}) {
    ExpectGradOk(Binary([stride](Var x, Var k) { return ConvTemporal(x, k, stride); }),
                 {RandomTensor({2, 3, 11}, rng), RandomTensor({2, 1, 4}, rng)});
  }
}

TEST(OpsGradientTest, ConvSpatialAndConv1d) {
  Rng rng(4);
  ExpectGradOk(Binary([](Var x, Var w) { return ConvSpatial(x, w); }),
               {RandomTensor({2, 3, 6}, rng), RandomTensor({4, 3}, rng)});
  ExpectGradOk(Binary([](Var x, Var k) { return Conv1d(x, k); }),
               {RandomTensor({2, 3, 40}, rng), RandomTensor({4, 3, 5}, rng)});
}

TEST(OpsGradientTest, Activations) {
  Rng rng(5);
  for (ActivationKind kind : {ActivationKind::kRelu, ActivationKind::kElu, ActivationKind::kSquare}) {
    ExpectGradOk(Unary([kind](Var x) { return Activation(x, kind); }),
                 {AwayFromZero({3, 7}, rng)});
  }
}

TEST(OpsGradientTest, MeanPool) {
  Rng rng(6);
  ExpectGradOk(Unary([](Var x) { return MeanPoolTime(x, 4, 2); }), {RandomTensor({2, 3, 12}, rng)});
  ExpectGradOk(Unary([](Var x) { return MeanPoolTime(x, 3, 5); }), {RandomTensor({1, 2, 14}, rng)});
}

TEST(OpsGradientTest, SoftmaxAndLosses) {
  Rng rng(7);
  ExpectGradOk(Unary([](Var x) { return Softmax(x); }), {RandomTensor({3, 4}, rng, -3, 3)});
  const std::vector<int> labels = {0, 3, 1};
  ExpectGradOk(
      [&](Graph& g, const std::vector<Tensor>& p, std::vector<Var>& wrt) {
        wrt.push_back(g.Param(p[0]));
        return SoftmaxCrossEntropy(wrt[0], labels);
      },
      {RandomTensor({3, 4}, rng, -3, 3)});
  ExpectGradOk(
      [](Graph& g, const std::vector<Tensor>& p, std::vector<Var>& wrt) {
        wrt.push_back(g.Param(p[0]));
        wrt.push_back(g.Param(p[1]));
        return Mse(wrt[0], wrt[1]);
      },
      {RandomTensor({3, 2}, rng), RandomTensor({3, 2}, rng)});
}

TEST(OpsGradientTest, GatherRowsAndNorm) {
  Rng rng(8);
  const std::vector<int> index = {2, 0, 2, 1};
  ExpectGradOk(Unary([&](Var t) { return GatherRows(t, index); }), {RandomTensor({3, 5}, rng)});
  ExpectGradOk(Unary([](Var x) { return RowL2Norm(x); }), {RandomTensor({4, 6}, rng)});
}

TEST(OpsTest, Conv1dEqualsTemporalThenSpatial) {
  Rng rng(9);
  const Tensor x = RandomTensor({2, 3, 20}, rng);
  const Tensor k = RandomTensor({4, 1, 5}, rng);
  const Tensor w = RandomTensor({6, 12}, rng);
  Graph g;
  Var two = ConvSpatial(ConvTemporal(g.Constant(x), g.Constant(k), 1), g.Constant(w));
  Tensor e({6, 3, 5});
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t m = 0; m < 5; ++m) {
        double s = 0.0;
        for (std::size_t j = 0; j < 4; ++j) s += w[i * 12 + c * 4 + j] * k[j * 5 + m];
        e[(i * 3 + c) * 5 + m] = s;
      }
  Var one = Conv1d(g.Constant(x), g.Constant(e));
  ASSERT_EQ(one.value().shape(), two.value().shape());
  for (std::size_t i = 0; i < one.value().size(); ++i) {
    EXPECT_NEAR(one.value()[i], two.value()[i], 1e-12);
  }
}

TEST(OpsTest, ConvTemporalHandValues) {
  Graph g;
  Var x = g.Constant(Tensor({1, 1, 5}, {1, 2, 3, 4, 5}));
  Var k = g.Constant(Tensor({1, 1, 2}, {1, -1}));
  EXPECT_EQ(ConvTemporal(x, k, 1).value().storage(), (std::vector<double>{-1, -1, -1, -1}));
  EXPECT_EQ(ConvTemporal(x, k, 2).value().storage(), (std::vector<double>{-1, -1}));
}

TEST(OpsTest, CrossEntropyIsStableForLargeLogits) {
  Graph g;
  const std::vector<int> labels = {0};
  Var ce = SoftmaxCrossEntropy(g.Constant(Tensor({1, 2}, {1000.0, -1000.0})), labels);
  EXPECT_NEAR(ce.value().item(), 0.0, 1e-12);
  Var bad = SoftmaxCrossEntropy(g.Constant(Tensor({1, 2}, {-1000.0, 1000.0})), labels);
  EXPECT_NEAR(bad.value().item(), 2000.0, 1e-9);
}

TEST(OpsTest, SignAndProjection) {
  const Tensor x({5}, {-2.0, -0.0, 0.0, 1e-300, 3.0});
  EXPECT_EQ(Sign(x).storage(), (std::vector<double>{-1, 0, 0, 1, 1}));
  const Tensor p = ProjectLinf(Tensor({4}, {-0.5, 0.005, 0.02, -0.01}), 0.01);
  EXPECT_EQ(p.storage(), (std::vector<double>{-0.01, 0.005, 0.01, -0.01}));
  EXPECT_ERROR_CODE(ProjectLinf(x, -1.0), ErrorCode::kParameter);
}

TEST(OpsTest, RowNormZeroRowHasZeroGradient) {
  Graph g;
  Var x = g.Param(Tensor({2, 2}, {0.0, 0.0, 3.0, 4.0}));
  Var n = RowL2Norm(x);
  EXPECT_EQ(n.value().storage(), (std::vector<double>{0.0, 5.0}));
  const Var wrt[1] = {x};
  auto grad = g.Grad(Sum(n), wrt);
  EXPECT_EQ(grad[0][0], 0.0);
  EXPECT_EQ(grad[0][1], 0.0);
  EXPECT_DOUBLE_EQ(grad[0][2], 0.6);
  EXPECT_DOUBLE_EQ(grad[0][3], 0.8);
}

TEST(OpsTest, ErrorsOnBadInput) {
  Graph g;
  Var a = g.Constant(Tensor({2, 3}));
  Var b = g.Constant(Tensor({2, 3}));
  EXPECT_ERROR_CODE(MatMul(a, b), ErrorCode::kDimension);
  const std::vector<int> bad = {0, 5};
  EXPECT_ERROR_CODE(SoftmaxCrossEntropy(a, bad), ErrorCode::kLabel);
  const std::vector<int> rows = {0, 2};
  EXPECT_ERROR_CODE(GatherRows(a, rows), ErrorCode::kLabel);
  EXPECT_ERROR_CODE(Conv1d(g.Constant(Tensor({1, 2, 4})), g.Constant(Tensor({1, 3, 2}))),
                    ErrorCode::kDimension);
  EXPECT_ERROR_CODE(ParseActivation("tanh"), ErrorCode::kParameter);
}

TEST(GraphTest, NonFiniteValueIsRejected) {
  Graph g;
  Var x = g.Param(Tensor({1}, {1e308}));
  EXPECT_ERROR_CODE(Scale(x, 10.0), ErrorCode::kNumerical);
}

TEST(GraphTest, GradContract) {
  Graph g;
  Var x = g.Param(Tensor({2}, {1.0, 2.0}));
  Var c = g.Constant(Tensor({2}, {1.0, 1.0}));
  const Var wrt_c[1] = {c};
  EXPECT_ERROR_CODE(g.Grad(Sum(x), wrt_c), ErrorCode::kContract);
  const Var wrt_x[1] = {x};
  EXPECT_ERROR_CODE(g.Grad(x, wrt_x), ErrorCode::kContract);
  // A leaf the output does not depend on gets a zero gradient.
  Var y = g.Param(Tensor({3}));
  const Var wrt_y[1] = {y};
  EXPECT_EQ(g.Grad(Sum(x), wrt_y)[0], Tensor({3}));
}

TEST(GraphTest, SharedSubexpressionAccumulates) {
  Graph g;
  Var x = g.Param(Tensor({1}, {3.0}));
  Var y = Add(Scale(x, 2.0), Activation(x, ActivationKind::kSquare));
  const Var wrt[1] = {x};
  EXPECT_DOUBLE_EQ(g.Grad(Sum(y), wrt)[0][0], 2.0 + 6.0);
}

}  // namespace
}  // namespace eegshield::numerics
