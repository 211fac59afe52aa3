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

#include "eegshield/numerics/tensor.h"

#include <cmath>
#include <utility>

#include "eegshield/common/error.h"

namespace eegshield::numerics {

std::size_t ShapeSize(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string ShapeString(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out += "x";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

namespace {

void CheckShape(const Shape& shape) {
  Require(!shape.empty(), ErrorCode::kDimension, "tensor shape is empty");
  for (std::size_t d : shape) {
    Require(d > 0, ErrorCode::kDimension,
            "tensor dimensions must be positive, got " + ShapeString(shape));
  }
}

}  // namespace

Tensor::Tensor(Shape shape) : shape_(std::move(shape)) {
  CheckShape(shape_);
  data_.assign(ShapeSize(shape_), 0.0);
}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  CheckShape(shape_);
  Require(data_.size() == ShapeSize(shape_), ErrorCode::kDimension,
          "data length " + std::to_string(data_.size()) +
              " does not match shape " + ShapeString(shape_));
}

Tensor Tensor::Full(Shape shape, double value) {
  Tensor t(std::move(shape));
  for (double& v : t.data_) v = value;
  return t;
}

Tensor Tensor::Identity(std::size_t n) {
  Tensor t({n, n});
  for (std::size_t i = 0; i < n; ++i) t.data_[i * n + i] = 1.0;
  return t;
}

double Tensor::item() const {
  Require(data_.size() == 1, ErrorCode::kContract,
          "item() on tensor of shape " + ShapeString(shape_));
  return data_[0];
}

bool Tensor::AllFinite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double Tensor::MaxAbs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Tensor Tensor::Reshaped(Shape shape) const {
  Require(ShapeSize(shape) == data_.size(), ErrorCode::kDimension,
          "cannot reshape " + ShapeString(shape_) + " to " +
              ShapeString(shape));
  return Tensor(std::move(shape), data_);
}

}  // namespace eegshield::numerics
