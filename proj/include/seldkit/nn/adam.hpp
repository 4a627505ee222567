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

#include <string>
#include <vector>

#include "seldkit/nn/layers.hpp"

namespace seldkit::nn {

template <typename T>
struct ParamRef {
  std::string name;
  Var<T> var;
};

template <typename T, typename M>
std::vector<ParamRef<T>> collect_params(M& module, const std::string& root) {
  std::vector<ParamRef<T>> out;
  module.visit_params(root, [&out](const std::string& name, Var<T>& v) {
    out.push_back({name, v});
  });
  return out;
}

template <typename T>
void zero_grads(std::vector<ParamRef<T>>& params) {
  for (auto& p : params) {
    p.var.grad();  // allocate on first use
    p.var.zero_grad();
  }
}

// Learning-rate schedule: fixed for the first 30 epochs, then 5% decay per
// epoch: lr(e) = base * 0.95^(e - 29) for e >= 30.
inline double lr_schedule(int epoch, double base_lr) {
  if (epoch < 0) throw InputError("lr_schedule: negative epoch");
  if (epoch < 30) return base_lr;
  return base_lr * std::pow(0.95, epoch - 29);
}

// Bias-corrected Adam (beta1 = 0.9, beta2 = 0.999, eps = 1e-8):
//   m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2
//   p <- p - lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
template <typename T>
class Adam {
 public:
  explicit Adam(double lr = 3e-4, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  int64_t step_count() const { return step_; }
  double lr() const { return lr_; }
  void set_lr(double lr) { lr_ = lr; }

  void step(std::vector<ParamRef<T>>& params) {
    if (m_.empty()) {
      for (const auto& p : params) {
        m_.emplace_back(p.var.value().shape());
        v_.emplace_back(p.var.value().shape());
      }
    }
    if (m_.size() != params.size())
      throw OptimError("adam: parameter list changed between steps");

    ++step_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));

    for (size_t i = 0; i < params.size(); ++i) {
      Var<T>& var = params[i].var;
      const Array<T>& g = var.grad();
      if (g.size() != var.value().size())
        throw OptimError("adam: missing gradient for " + params[i].name);
      Array<T>& m = m_[i];
      Array<T>& v = v_[i];
      T* p = var.value().data();
      const T* gd = g.data();
      for (int64_t j = 0; j < g.size(); ++j) {
        const double gj = static_cast<double>(gd[j]);
        if (!std::isfinite(gj))
          throw OptimError("adam: non-finite gradient in " + params[i].name);
        const double mj = beta1_ * static_cast<double>(m[j]) + (1.0 - beta1_) * gj;
        const double vj = beta2_ * static_cast<double>(v[j]) + (1.0 - beta2_) * gj * gj;
        m[j] = static_cast<T>(mj);
        v[j] = static_cast<T>(vj);
        const double update = lr_ * (mj / bc1) / (std::sqrt(vj / bc2) + eps_);
        p[j] = static_cast<T>(static_cast<double>(p[j]) - update);
      }
    }
  }

 private:
  double lr_, beta1_, beta2_, eps_;
  int64_t step_ = 0;
  std::vector<Array<T>> m_, v_;
};

}  // namespace seldkit::nn
