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

#include "eegshield/numerics/graph.h"

#include <string>
#include <utility>

#include "eegshield/common/error.h"

namespace eegshield::numerics {

const Tensor& Var::value() const { return graph->value(*this); }

void Graph::CheckOwned(Var v) const {
  Require(v.graph == this && v.id < nodes_.size(), ErrorCode::kContract,
          "variable does not belong to this graph");
}

Var Graph::Leaf(Tensor value, bool requires_grad) {
  Node node;
  node.value = std::move(value);
  node.requires_grad = requires_grad;
  node.leaf = true;
  nodes_.push_back(std::move(node));
  return Var{this, nodes_.size() - 1};
}

Var Graph::Record(Tensor value, std::vector<Var> parents, BackwardFn backward) {
  if (!value.AllFinite()) {
    Fail(ErrorCode::kNumerical, "non-finite value produced by operation " +
                                    std::to_string(nodes_.size()));
  }
  Node node;
  node.value = std::move(value);
  node.leaf = false;
  node.parents.reserve(parents.size());
  for (const Var& p : parents) {
    CheckOwned(p);
    node.parents.push_back(p.id);
    node.requires_grad = node.requires_grad || nodes_[p.id].requires_grad;
  }
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{this, nodes_.size() - 1};
}

const Tensor& Graph::value(Var v) const {
  CheckOwned(v);
  return nodes_[v.id].value;
}

bool Graph::requires_grad(Var v) const {
  CheckOwned(v);
  return nodes_[v.id].requires_grad;
}

std::vector<Tensor> Graph::Grad(Var output, std::span<const Var> wrt) {
  CheckOwned(output);
  Require(nodes_[output.id].value.size() == 1, ErrorCode::kContract,
          "gradient requested of non-scalar output of shape " +
              ShapeString(nodes_[output.id].value.shape()));
  for (const Var& w : wrt) {
    CheckOwned(w);
    Require(nodes_[w.id].requires_grad, ErrorCode::kContract,
            "gradient requested with respect to a constant node");
  }

  grads_.assign(nodes_.size(), Tensor());
  grads_[output.id] = Tensor::Full(nodes_[output.id].value.shape(), 1.0);
  for (std::size_t id = output.id + 1; id-- > 0;) {
    const Node& node = nodes_[id];
    if (node.leaf || !node.requires_grad || grads_[id].size() == 0) continue;
    BackwardContext ctx(*this, id);
    node.backward(ctx);
  }

  std::vector<Tensor> result;
  result.reserve(wrt.size());
  for (const Var& w : wrt) {
    if (grads_[w.id].size() == 0) {
      result.emplace_back(nodes_[w.id].value.shape());
    } else {
      result.push_back(grads_[w.id]);
    }
  }
  grads_.clear();
  return result;
}

Tensor* BackwardContext::grad(Var parent) {
  Graph::Node& node = graph_.nodes_[parent.id];
  if (!node.requires_grad) return nullptr;
  Tensor& g = graph_.grads_[parent.id];
  if (g.size() == 0) g = Tensor(node.value.shape());
  return &g;
}

}  // namespace eegshield::numerics
