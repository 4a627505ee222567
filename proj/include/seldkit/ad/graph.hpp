/*
 * Copyright 2026 The seldkit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <functional>
#include <memory>
#include <unordered_set>
#include <vector>

#include "seldkit/ndarray.hpp"

namespace seldkit::ad {

// Reverse-mode graph node. Nodes own their forward value and (lazily) their
// gradient; backward_fn scatters the node's gradient into its parents.
// Gradients accumulate additively across fan-out.
template <typename T>
struct Node {
  Array<T> value;
  Array<T> grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward_fn;

  Array<T>& ensure_grad() {
    if (grad.size() != value.size()) grad = Array<T>(value.shape());
    return grad;
  }
};

// Value-semantics handle onto a graph node. Cheap to copy; the graph is kept
// alive by parent links and freed when the last handle goes away.
template <typename T>
class Var {
 public:
  Var() = default;
  explicit Var(Array<T> value, bool requires_grad = false)
      : node_(std::make_shared<Node<T>>()) {
    node_->value = std::move(value);
    node_->requires_grad = requires_grad;
  }

  static Var constant(Array<T> value) { return Var(std::move(value), false); }
  static Var leaf(Array<T> value) { return Var(std::move(value), true); }

  // Shallow-const handle semantics: a const Var still exposes its node's
  // mutable storage, the way a shared pointer would.
  bool defined() const { return node_ != nullptr; }
  Array<T>& value() const { return node_->value; }
  Array<T>& grad() const { return node_->ensure_grad(); }
  bool requires_grad() const { return node_ && node_->requires_grad; }

  const Shape& shape() const { return node_->value.shape(); }
  int64_t dim(int i) const { return node_->value.dim(i); }
  int ndim() const { return node_->value.ndim(); }
  int64_t size() const { return node_->value.size(); }

  void zero_grad() const {
    if (node_ && node_->grad.size() == node_->value.size()) node_->grad.fill(T(0));
  }

  std::shared_ptr<Node<T>> node() const { return node_; }

  // Builds a result node wired to its parents. backward receives the result
  // node; parents' gradients must be accumulated with +=.
  static Var make(Array<T> value, std::vector<Var> parents,
                  std::function<void(Node<T>&)> backward) {
    Var out(std::move(value), false);
    for (const Var& p : parents)
      if (p.requires_grad()) out.node_->requires_grad = true;
    if (out.node_->requires_grad) {
      out.node_->backward_fn = std::move(backward);
      for (const Var& p : parents) out.node_->parents.push_back(p.node_);
    }
    return out;
  }

 private:
  std::shared_ptr<Node<T>> node_;
};

// Reverse topological sweep from a scalar root. Iterative DFS; recurrent
// graphs (GRU chains) would overflow a recursive one.
template <typename T>
void backward(const Var<T>& root) {
  if (!root.defined()) throw InputError("backward: undefined variable");
  if (root.size() != 1) throw ShapeError("backward: root must be scalar");
  if (!root.requires_grad()) return;

  std::vector<Node<T>*> order;
  std::unordered_set<Node<T>*> visited;
  std::vector<std::pair<Node<T>*, size_t>> stack;
  stack.push_back({root.node().get(), 0});
  visited.insert(root.node().get());
  while (!stack.empty()) {
    auto& [node, idx] = stack.back();
    if (idx < node->parents.size()) {
      Node<T>* parent = node->parents[idx++].get();
      if (parent->requires_grad && !visited.count(parent)) {
        visited.insert(parent);
        stack.push_back({parent, 0});
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  for (Node<T>* n : order) n->ensure_grad();
  root.node()->grad[0] = T(1);
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if ((*it)->backward_fn) (*it)->backward_fn(**it);
}

}  // namespace seldkit::ad
