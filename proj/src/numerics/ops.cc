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

#include "eegshield/numerics/ops.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "eegshield/common/error.h"
#include "kernels.h"

namespace eegshield::numerics {

namespace {

using internal::Axpy;
using internal::Dot;

void RequireRank(const Tensor& t, std::size_t rank, const char* op) {
  Require(t.rank() == rank, ErrorCode::kDimension,
          std::string(op) + " expects rank " + std::to_string(rank) +
              ", got " + ShapeString(t.shape()));
}

void RequireSameShape(const Tensor& a, const Tensor& b, const char* op) {
  Require(a.shape() == b.shape(), ErrorCode::kDimension,
          std::string(op) + " shape mismatch " + ShapeString(a.shape()) +
              " vs " + ShapeString(b.shape()));
}

}  // namespace

std::string_view ActivationName(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::kRelu:
      return "relu";
    case ActivationKind::kElu:
      return "elu";
    case ActivationKind::kSquare:
      return "square";
  }
  return "relu";
}

ActivationKind ParseActivation(std::string_view name) {
  if (name == "relu") return ActivationKind::kRelu;
  if (name == "elu") return ActivationKind::kElu;
  if (name == "square") return ActivationKind::kSquare;
  Fail(ErrorCode::kParameter, "unknown activation '" + std::string(name) + "'");
}

Var MatMul(Var a, Var b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  RequireRank(av, 2, "matmul");
  RequireRank(bv, 2, "matmul");
  const std::size_t m = av.dim(0), k = av.dim(1), n = bv.dim(1);
  Require(bv.dim(0) == k, ErrorCode::kDimension,
          "matmul inner dimensions differ: " + ShapeString(av.shape()) +
              " x " + ShapeString(bv.shape()));
  Tensor out({m, n});
  const double* A = av.data().data();
  const double* B = bv.data().data();
  double* C = out.data().data();
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = C + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      Axpy(A[i * k + p], B + p * n, crow, n);
    }
  }
  return a.graph->Record(std::move(out), {a, b}, [a, b, m, k, n](BackwardContext& ctx) {
    const double* G = ctx.out_grad().data().data();
    const double* A = ctx.value(a).data().data();
    const double* B = ctx.value(b).data().data();
    if (Tensor* ga = ctx.grad(a)) {
      double* dA = ga->data().data();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) dA[i * k + p] += Dot(G + i * n, B + p * n, n);
      }
    }
    if (Tensor* gb = ctx.grad(b)) {
      double* dB = gb->data().data();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) Axpy(A[i * k + p], G + i * n, dB + p * n, n);
      }
    }
  });
}

Var AddBias(Var x, Var bias) {
  const Tensor& xv = x.value();
  const Tensor& bv = bias.value();
  RequireRank(xv, 2, "add_bias");
  const std::size_t rows = xv.dim(0), cols = xv.dim(1);
  Require(bv.size() == cols, ErrorCode::kDimension,
          "bias length " + std::to_string(bv.size()) + " does not match " +
              ShapeString(xv.shape()));
  Tensor out = xv;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) out[i * cols + j] += bv[j];
  }
  return x.graph->Record(std::move(out), {x, bias}, [x, bias, rows, cols](BackwardContext& ctx) {
    const Tensor& g = ctx.out_grad();
    if (Tensor* gx = ctx.grad(x)) {
      for (std::size_t i = 0; i < g.size(); ++i) (*gx)[i] += g[i];
    }
    if (Tensor* gb = ctx.grad(bias)) {
      for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) (*gb)[j] += g[i * cols + j];
      }
    }
  });
}

Var Add(Var a, Var b) {
  RequireSameShape(a.value(), b.value(), "add");
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  return a.graph->Record(std::move(out), {a, b}, [a, b](BackwardContext& ctx) {
    const Tensor& g = ctx.out_grad();
    if (Tensor* ga = ctx.grad(a)) {
      for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i];
    }
    if (Tensor* gb = ctx.grad(b)) {
      for (std::size_t i = 0; i < g.size(); ++i) (*gb)[i] += g[i];
    }
  });
}

Var Scale(Var a, double factor) {
  Tensor out = a.value();
  for (double& v : out.data()) v *= factor;
  return a.graph->Record(std::move(out), {a}, [a, factor](BackwardContext& ctx) {
    const Tensor& g = ctx.out_grad();
    if (Tensor* ga = ctx.grad(a)) {
      for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += factor * g[i];
    }
  });
}

Var Sum(Var a) {
  double total = 0.0;
  for (double v : a.value().data()) total += v;
  return a.graph->Record(Tensor::Scalar(total), {a}, [a](BackwardContext& ctx) {
    const double g = ctx.out_grad()[0];
    if (Tensor* ga = ctx.grad(a)) {
      for (double& v : ga->data()) v += g;
    }
  });
}

Var Reshape(Var a, Shape shape) {
  Tensor out = a.value().Reshaped(std::move(shape));
  return a.graph->Record(std::move(out), {a}, [a](BackwardContext& ctx) {
    const Tensor& g = ctx.out_grad();
    if (Tensor* ga = ctx.grad(a)) {
      for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i];
    }
  });
}

Var Flatten(Var a) {
  const Tensor& av = a.value();
  Require(av.rank() >= 1, ErrorCode::kDimension, "flatten of scalar");
  return Reshape(a, {av.dim(0), av.size() / av.dim(0)});
}

Var ConvTemporal(Var x, Var kernels, std::size_t stride) {
  const Tensor& xv = x.value();
  const Tensor& kv = kernels.value();
  RequireRank(xv, 3, "conv_temporal input");
  RequireRank(kv, 3, "conv_temporal kernels");
  Require(kv.dim(1) == 1, ErrorCode::kDimension,
          "conv_temporal kernels must be f x 1 x k, got " +
              ShapeString(kv.shape()));
  Require(stride >= 1, ErrorCode::kParameter, "conv_temporal stride must be >= 1");
  const std::size_t batch = xv.dim(0), chans = xv.dim(1), len = xv.dim(2);
  const std::size_t filters = kv.dim(0), klen = kv.dim(2);
  Require(klen <= len, ErrorCode::kDimension,
          "kernel length " + std::to_string(klen) + " exceeds signal length " +
              std::to_string(len));
  const std::size_t out_len = (len - klen) / stride + 1;

  Tensor out({batch, chans * filters, out_len});
  const double* X = xv.data().data();
  const double* K = kv.data().data();
  double* Y = out.data().data();
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t ch = 0; ch < chans; ++ch) {
      const double* xrow = X + (b * chans + ch) * len;
      for (std::size_t j = 0; j < filters; ++j) {
        double* yrow = Y + ((b * chans + ch) * filters + j) * out_len;
        for (std::size_t m = 0; m < klen; ++m) {
          const double w = K[j * klen + m];
          const double* src = xrow + m;
          if (stride == 1) {
            Axpy(w, src, yrow, out_len);
          } else {
            for (std::size_t tau = 0; tau < out_len; ++tau) {
              yrow[tau] += w * src[tau * stride];
            }
          }
        }
      }
    }
  }
  return x.graph->Record(
      std::move(out), {x, kernels},
      [x, kernels, batch, chans, len, filters, klen, out_len, stride](BackwardContext& ctx) {
        const double* G = ctx.out_grad().data().data();
        const double* X = ctx.value(x).data().data();
        const double* K = ctx.value(kernels).data().data();
        Tensor* gx = ctx.grad(x);
        Tensor* gk = ctx.grad(kernels);
        for (std::size_t b = 0; b < batch; ++b) {
          for (std::size_t ch = 0; ch < chans; ++ch) {
            const double* xrow = X + (b * chans + ch) * len;
            double* dxrow = gx ? gx->data().data() + (b * chans + ch) * len : nullptr;
            for (std::size_t j = 0; j < filters; ++j) {
              const double* grow = G + ((b * chans + ch) * filters + j) * out_len;
              for (std::size_t m = 0; m < klen; ++m) {
                if (stride == 1) {
                  if (dxrow != nullptr) Axpy(K[j * klen + m], grow, dxrow + m, out_len);
                  if (gk != nullptr) (*gk)[j * klen + m] += Dot(xrow + m, grow, out_len);
                  continue;
                }
                if (dxrow != nullptr) {
                  const double w = K[j * klen + m];
                  for (std::size_t tau = 0; tau < out_len; ++tau) {
                    dxrow[tau * stride + m] += w * grow[tau];
                  }
                }
                if (gk != nullptr) {
                  double acc = 0.0;
                  for (std::size_t tau = 0; tau < out_len; ++tau) {
                    acc += xrow[tau * stride + m] * grow[tau];
                  }
                  (*gk)[j * klen + m] += acc;
                }
              }
            }
          }
        }
      });
}

Var Conv1d(Var x, Var kernels) {
  const Tensor& xv = x.value();
  const Tensor& kv = kernels.value();
  RequireRank(xv, 3, "conv1d input");
  RequireRank(kv, 3, "conv1d kernels");
  Require(kv.dim(1) == xv.dim(1), ErrorCode::kDimension,
          "conv1d kernels " + ShapeString(kv.shape()) + " do not match input " +
              ShapeString(xv.shape()));
  const std::size_t batch = xv.dim(0), chans = xv.dim(1), len = xv.dim(2);
  const std::size_t outs = kv.dim(0), klen = kv.dim(2);
  Require(klen >= 1 && klen <= len, ErrorCode::kDimension,
          "kernel length " + std::to_string(klen) + " does not fit signal length " +
              std::to_string(len));
  const std::size_t out_len = len - klen + 1;

  Tensor out({batch, outs, out_len});
  const double* X = xv.data().data();
  const double* K = kv.data().data();
  double* Y = out.data().data();
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t i = 0; i < outs; ++i) {
      double* yrow = Y + (b * outs + i) * out_len;
      for (std::size_t ch = 0; ch < chans; ++ch) {
        const double* xrow = X + (b * chans + ch) * len;
        const double* krow = K + (i * chans + ch) * klen;
        for (std::size_t m = 0; m < klen; ++m) Axpy(krow[m], xrow + m, yrow, out_len);
      }
    }
  }
  return x.graph->Record(
      std::move(out), {x, kernels},
      [x, kernels, batch, chans, len, outs, klen, out_len](BackwardContext& ctx) {
        const double* G = ctx.out_grad().data().data();
        const double* X = ctx.value(x).data().data();
        const double* K = ctx.value(kernels).data().data();
        Tensor* gx = ctx.grad(x);
        Tensor* gk = ctx.grad(kernels);
        double* DK = gk ? gk->data().data() : nullptr;
        for (std::size_t b = 0; b < batch; ++b) {
          for (std::size_t i = 0; i < outs; ++i) {
            const double* grow = G + (b * outs + i) * out_len;
            for (std::size_t ch = 0; ch < chans; ++ch) {
              const std::size_t kbase = (i * chans + ch) * klen;
              if (gx != nullptr) {
                double* dxrow = gx->data().data() + (b * chans + ch) * len;
                for (std::size_t m = 0; m < klen; ++m) Axpy(K[kbase + m], grow, dxrow + m, out_len);
              }
              if (DK != nullptr) {
                const double* xrow = X + (b * chans + ch) * len;
                for (std::size_t m = 0; m < klen; ++m) DK[kbase + m] += Dot(xrow + m, grow, out_len);
              }
            }
          }
        }
      });
}

Var ConvSpatial(Var x, Var mix) {
  const Tensor& xv = x.value();
  const Tensor& mv = mix.value();
  RequireRank(xv, 3, "conv_spatial input");
  RequireRank(mv, 2, "conv_spatial mix");
  const std::size_t batch = xv.dim(0), chans = xv.dim(1), len = xv.dim(2);
  const std::size_t outs = mv.dim(0);
  Require(mv.dim(1) == chans, ErrorCode::kDimension,
          "conv_spatial mix has " + std::to_string(mv.dim(1)) +
              " columns for " + std::to_string(chans) + " channels");
  Tensor out({batch, outs, len});
  const double* X = xv.data().data();
  const double* W = mv.data().data();
  double* Y = out.data().data();
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t i = 0; i < outs; ++i) {
      double* yrow = Y + (b * outs + i) * len;
      for (std::size_t ch = 0; ch < chans; ++ch) {
        Axpy(W[i * chans + ch], X + (b * chans + ch) * len, yrow, len);
      }
    }
  }
  return x.graph->Record(
      std::move(out), {x, mix}, [x, mix, batch, chans, len, outs](BackwardContext& ctx) {
        const double* G = ctx.out_grad().data().data();
        const double* X = ctx.value(x).data().data();
        const double* W = ctx.value(mix).data().data();
        Tensor* gx = ctx.grad(x);
        Tensor* gm = ctx.grad(mix);
        for (std::size_t b = 0; b < batch; ++b) {
          for (std::size_t i = 0; i < outs; ++i) {
            const double* grow = G + (b * outs + i) * len;
            for (std::size_t ch = 0; ch < chans; ++ch) {
              if (gx != nullptr) {
                Axpy(W[i * chans + ch], grow, gx->data().data() + (b * chans + ch) * len, len);
              }
              if (gm != nullptr) {
                (*gm)[i * chans + ch] += Dot(grow, X + (b * chans + ch) * len, len);
              }
            }
          }
        }
      });
}

Var Activation(Var x, ActivationKind kind) {
  Tensor out = x.value();
  switch (kind) {
    case ActivationKind::kRelu:
      for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
      break;
    case ActivationKind::kElu:
      for (double& v : out.data()) v = v > 0.0 ? v : std::expm1(v);
      break;
    case ActivationKind::kSquare:
      for (double& v : out.data()) v = v * v;
      break;
  }
  return x.graph->Record(std::move(out), {x}, [x, kind](BackwardContext& ctx) {
    Tensor* gx = ctx.grad(x);
    if (gx == nullptr) return;
    const Tensor& g = ctx.out_grad();
    const Tensor& xv = ctx.value(x);
    const std::size_t n = g.size();
    switch (kind) {
      case ActivationKind::kRelu:
        for (std::size_t i = 0; i < n; ++i) (*gx)[i] += xv[i] > 0.0 ? g[i] : 0.0;
        break;
      case ActivationKind::kElu:
        for (std::size_t i = 0; i < n; ++i) {
          (*gx)[i] += xv[i] > 0.0 ? g[i] : g[i] * std::exp(xv[i]);
        }
        break;
      case ActivationKind::kSquare:
        for (std::size_t i = 0; i < n; ++i) (*gx)[i] += 2.0 * xv[i] * g[i];
        break;
    }
  });
}

Var MeanPoolTime(Var x, std::size_t window, std::size_t stride) {
  const Tensor& xv = x.value();
  RequireRank(xv, 3, "mean_pool_time");
  Require(window >= 1 && stride >= 1, ErrorCode::kParameter,
          "pool window and stride must be >= 1");
  const std::size_t rows = xv.dim(0) * xv.dim(1), len = xv.dim(2);
  Require(window <= len, ErrorCode::kDimension,
          "pool window " + std::to_string(window) + " exceeds length " +
              std::to_string(len));
  const std::size_t out_len = (len - window) / stride + 1;
  const double inv = 1.0 / static_cast<double>(window);
  Tensor out({xv.dim(0), xv.dim(1), out_len});
  const double* X = xv.data().data();
  double* Y = out.data().data();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t tau = 0; tau < out_len; ++tau) {
      const double* src = X + r * len + tau * stride;
      double acc = 0.0;
      for (std::size_t m = 0; m < window; ++m) acc += src[m];
      Y[r * out_len + tau] = acc * inv;
    }
  }
  return x.graph->Record(
      std::move(out), {x}, [x, rows, len, out_len, window, stride, inv](BackwardContext& ctx) {
        Tensor* gx = ctx.grad(x);
        if (gx == nullptr) return;
        const double* G = ctx.out_grad().data().data();
        double* dX = gx->data().data();
        for (std::size_t r = 0; r < rows; ++r) {
          for (std::size_t tau = 0; tau < out_len; ++tau) {
            const double g = G[r * out_len + tau] * inv;
            double* dst = dX + r * len + tau * stride;
            for (std::size_t m = 0; m < window; ++m) dst[m] += g;
          }
        }
      });
}

namespace {

// Row-wise softmax of a [rows x cols] buffer.
void SoftmaxRows(const double* z, double* p, std::size_t rows, std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* zr = z + i * cols;
    double* pr = p + i * cols;
    const double mx = *std::max_element(zr, zr + cols);
    double total = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      pr[j] = std::exp(zr[j] - mx);
      total += pr[j];
    }
    for (std::size_t j = 0; j < cols; ++j) pr[j] /= total;
  }
}

}  // namespace

Var Softmax(Var logits) {
  const Tensor& z = logits.value();
  RequireRank(z, 2, "softmax");
  const std::size_t rows = z.dim(0), cols = z.dim(1);
  Tensor out(z.shape());
  SoftmaxRows(z.data().data(), out.data().data(), rows, cols);
  return logits.graph->Record(std::move(out), {logits}, [logits, rows, cols](BackwardContext& ctx) {
    Tensor* gz = ctx.grad(logits);
    if (gz == nullptr) return;
    const Tensor& g = ctx.out_grad();
    const Tensor& p = ctx.output();
    for (std::size_t i = 0; i < rows; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < cols; ++j) dot += g[i * cols + j] * p[i * cols + j];
      for (std::size_t j = 0; j < cols; ++j) {
        (*gz)[i * cols + j] += p[i * cols + j] * (g[i * cols + j] - dot);
      }
    }
  });
}

Var SoftmaxCrossEntropy(Var logits, std::span<const int> labels) {
  const Tensor& z = logits.value();
  RequireRank(z, 2, "softmax_cross_entropy");
  const std::size_t rows = z.dim(0), cols = z.dim(1);
  Require(labels.size() == rows, ErrorCode::kDimension,
          "label count " + std::to_string(labels.size()) + " does not match " +
              std::to_string(rows) + " logit rows");
  std::vector<int> owned(labels.begin(), labels.end());
  for (int y : owned) {
    Require(y >= 0 && static_cast<std::size_t>(y) < cols, ErrorCode::kLabel,
            "label " + std::to_string(y) + " outside [0, " +
                std::to_string(cols) + ")");
  }
  double total = 0.0;
  const double* Z = z.data().data();
  for (std::size_t i = 0; i < rows; ++i) {
    const double* zr = Z + i * cols;
    const double mx = *std::max_element(zr, zr + cols);
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) s += std::exp(zr[j] - mx);
    total += mx + std::log(s) - zr[owned[i]];
  }
  const double mean = total / static_cast<double>(rows);
  return logits.graph->Record(
      Tensor::Scalar(mean), {logits},
      [logits, rows, cols, owned = std::move(owned)](BackwardContext& ctx) {
        Tensor* gz = ctx.grad(logits);
        if (gz == nullptr) return;
        const double scale = ctx.out_grad()[0] / static_cast<double>(rows);
        std::vector<double> p(rows * cols);
        SoftmaxRows(ctx.value(logits).data().data(), p.data(), rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
          p[i * cols + owned[i]] -= 1.0;
          for (std::size_t j = 0; j < cols; ++j) {
            (*gz)[i * cols + j] += scale * p[i * cols + j];
          }
        }
      });
}

Var Mse(Var a, Var b) {
  RequireSameShape(a.value(), b.value(), "mse");
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  double total = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) {
    const double d = av[i] - bv[i];
    total += d * d;
  }
  const double n = static_cast<double>(av.size());
  return a.graph->Record(Tensor::Scalar(total / n), {a, b}, [a, b, n](BackwardContext& ctx) {
    const double g = ctx.out_grad()[0] * 2.0 / n;
    const Tensor& av = ctx.value(a);
    const Tensor& bv = ctx.value(b);
    if (Tensor* ga = ctx.grad(a)) {
      for (std::size_t i = 0; i < av.size(); ++i) (*ga)[i] += g * (av[i] - bv[i]);
    }
    if (Tensor* gb = ctx.grad(b)) {
      for (std::size_t i = 0; i < av.size(); ++i) (*gb)[i] -= g * (av[i] - bv[i]);
    }
  });
}

Var GatherRows(Var table, std::span<const int> index) {
  const Tensor& tv = table.value();
  Require(tv.rank() >= 1, ErrorCode::kDimension, "gather from scalar");
  const std::size_t n = tv.dim(0);
  const std::size_t row = tv.size() / n;
  std::vector<int> owned(index.begin(), index.end());
  Require(!owned.empty(), ErrorCode::kDimension, "gather with empty index");
  Shape shape = tv.shape();
  shape[0] = owned.size();
  Tensor out(shape);
  for (std::size_t i = 0; i < owned.size(); ++i) {
    const int r = owned[i];
    Require(r >= 0 && static_cast<std::size_t>(r) < n, ErrorCode::kLabel,
            "row index " + std::to_string(r) + " outside [0, " +
                std::to_string(n) + ")");
    std::copy_n(tv.data().data() + r * row, row, out.data().data() + i * row);
  }
  return table.graph->Record(
      std::move(out), {table}, [table, row, owned = std::move(owned)](BackwardContext& ctx) {
        Tensor* gt = ctx.grad(table);
        if (gt == nullptr) return;
        const double* G = ctx.out_grad().data().data();
        for (std::size_t i = 0; i < owned.size(); ++i) {
          double* dst = gt->data().data() + owned[i] * row;
          for (std::size_t j = 0; j < row; ++j) dst[j] += G[i * row + j];
        }
      });
}

Var RowL2Norm(Var x) {
  const Tensor& xv = x.value();
  RequireRank(xv, 2, "row_l2_norm");
  const std::size_t rows = xv.dim(0), cols = xv.dim(1);
  Tensor out({rows});
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) s += xv[i * cols + j] * xv[i * cols + j];
    out[i] = std::sqrt(s);
  }
  return x.graph->Record(std::move(out), {x}, [x, rows, cols](BackwardContext& ctx) {
    Tensor* gx = ctx.grad(x);
    if (gx == nullptr) return;
    const Tensor& g = ctx.out_grad();
    const Tensor& norms = ctx.output();
    const Tensor& xv = ctx.value(x);
    for (std::size_t i = 0; i < rows; ++i) {
      if (norms[i] == 0.0) continue;
      const double s = g[i] / norms[i];
      for (std::size_t j = 0; j < cols; ++j) (*gx)[i * cols + j] += s * xv[i * cols + j];
    }
  });
}

Tensor Sign(const Tensor& x) {
  Tensor out = x;
  for (double& v : out.data()) v = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
  return out;
}

Tensor ProjectLinf(const Tensor& delta, double epsilon) {
  Require(epsilon >= 0.0, ErrorCode::kParameter,
          "projection radius must be non-negative");
  Tensor out = delta;
  for (double& v : out.data()) v = std::clamp(v, -epsilon, epsilon);
  return out;
}

}  // namespace eegshield::numerics
