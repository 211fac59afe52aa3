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

#ifndef EEGSHIELD_NUMERICS_GRAPH_H_
#define EEGSHIELD_NUMERICS_GRAPH_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "eegshield/numerics/tensor.h"

namespace eegshield::numerics {

class Graph;

// Handle to a node recorded on a Graph. Cheap to copy; valid as long as the
// graph lives.
struct Var {
  Graph* graph = nullptr;
  std::size_t id = 0;

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
};

class BackwardContext;

// Tape of tensor operations. Nodes are appended in evaluation order, so the
// node list is already topologically sorted and the reverse pass is a single
// sweep from the output back to the first node.
class Graph {
 public:
  using BackwardFn = std::function<void(BackwardContext&)>;

  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  // Leaf node. Differentiable leaves accept gradients; constant leaves block
  // them.
  Var Leaf(Tensor value, bool requires_grad);
  Var Param(Tensor value) { return Leaf(std::move(value), true); }
  Var Constant(Tensor value) { return Leaf(std::move(value), false); }

  // Appends an operation node. `backward` receives the output gradient and
  // accumulates into the parents that need gradients. Non-finite values are
  // rejected here, so a NaN never propagates silently.
  Var Record(Tensor value, std::vector<Var> parents, BackwardFn backward);

  const Tensor& value(Var v) const;
  bool requires_grad(Var v) const;
  std::size_t size() const { return nodes_.size(); }

  // Reverse-mode gradients of the scalar `output` with respect to each node
  // in `wrt`. Nodes not reached from the output get a zero tensor.
  std::vector<Tensor> Grad(Var output, std::span<const Var> wrt);

 private:
  friend class BackwardContext;

  struct Node {
    Tensor value;
    std::vector<std::size_t> parents;
    BackwardFn backward;
    bool requires_grad = false;
    bool leaf = true;
  };

  void CheckOwned(Var v) const;

  std::vector<Node> nodes_;
  std::vector<Tensor> grads_;
};

// View of one node during the reverse sweep.
class BackwardContext {
 public:
  const Tensor& out_grad() const { return graph_.grads_[self_]; }
  const Tensor& output() const { return graph_.nodes_[self_].value; }
  const Tensor& value(Var v) const { return graph_.nodes_[v.id].value; }
  // Gradient buffer of a parent, zero-initialized on first use; nullptr when
  // that parent does not need a gradient.
  Tensor* grad(Var parent);

 private:
  friend class Graph;
  BackwardContext(Graph& graph, std::size_t self) : graph_(graph), self_(self) {}
  Graph& graph_;
  std::size_t self_;
};

}  // namespace eegshield::numerics

#endif  // EEGSHIELD_NUMERICS_GRAPH_H_
