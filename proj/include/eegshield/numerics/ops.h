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

#ifndef EEGSHIELD_NUMERICS_OPS_H_
#define EEGSHIELD_NUMERICS_OPS_H_

#include <cstddef>
#include <span>
#include <string_view>

#include "eegshield/numerics/graph.h"
#include "eegshield/numerics/tensor.h"

namespace eegshield::numerics {

enum class ActivationKind { kRelu, kElu, kSquare };

std::string_view ActivationName(ActivationKind kind);
ActivationKind ParseActivation(std::string_view name);

// a[m x k] * b[k x n].
Var MatMul(Var a, Var b);

// x[b x n] + bias[n], broadcast over rows.
Var AddBias(Var x, Var bias);

Var Add(Var a, Var b);
Var Scale(Var a, double factor);
Var Sum(Var a);
Var Reshape(Var a, Shape shape);

// Collapses every axis after the first: [b x ...] -> [b x rest].
Var Flatten(Var a);

// Valid cross-correlation of every channel of x[b x c x t] with every kernel
// of kernels[f x 1 x k]. Output channel ch * f + j holds channel ch filtered
// by kernel j, giving [b x (c*f) x t'] with t' = (t - k) / stride + 1.
Var ConvTemporal(Var x, Var kernels, std::size_t stride);

// Per-time-step channel mixing: out[b][i][tau] = sum_c mix[i][c] x[b][c][tau].
Var ConvSpatial(Var x, Var mix);

// Multichannel valid cross-correlation:
// out[b][i][tau] = sum_c sum_m kernels[i][c][m] x[b][c][tau + m], stride 1.
// ConvSpatial(ConvTemporal(x, K, 1), W) equals Conv1d(x, E) with
// E[i][c][m] = sum_j W[i][c * f + j] K[j][0][m].
Var Conv1d(Var x, Var kernels);

// Elementwise nonlinearity. elu uses alpha = 1; square has derivative 2x.
Var Activation(Var x, ActivationKind kind);

// Mean over windows along the last axis of x[b x c x t].
Var MeanPoolTime(Var x, std::size_t window, std::size_t stride);

// Row-wise softmax of logits[b x K].
Var Softmax(Var logits);

// Mean over the batch of -log softmax(logits)[label], evaluated with the
// log-sum-exp shift so saturated logits stay finite.
Var SoftmaxCrossEntropy(Var logits, std::span<const int> labels);

// Mean of (a - b)^2 over all elements.
Var Mse(Var a, Var b);

// Rows of table[n x ...] selected by index: [len(index) x ...]. Gradients
// scatter-add back into the selected rows.
Var GatherRows(Var table, std::span<const int> index);

// Euclidean norm of each row of x[b x d] -> [b]. The gradient of a zero row
// is taken as zero.
Var RowL2Norm(Var x);

// Elementwise sign with sign(0) = 0.
Tensor Sign(const Tensor& x);

// Clamp to [-epsilon, +epsilon].
Tensor ProjectLinf(const Tensor& delta, double epsilon);

}  // namespace eegshield::numerics

#endif  // EEGSHIELD_NUMERICS_OPS_H_
