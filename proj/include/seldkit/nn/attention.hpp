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

#include "seldkit/nn/layers.hpp"

namespace seldkit::nn {

// Scaled dot-product attention over pre-projected q/k/v, split into heads
// along the feature axis. q: [Tq x D], k/v: [Tk x D].
template <typename T>
Var<T> attention_heads(const Var<T>& q, const Var<T>& k, const Var<T>& v, int heads) {
  const int64_t D = q.dim(1);
  if (D % heads != 0)
    throw ConfigError("attention: dim " + std::to_string(D) + " not divisible by " +
                      std::to_string(heads) + " heads");
  const int64_t dh = D / heads;
  const T inv_sqrt = static_cast<T>(1.0 / std::sqrt(static_cast<double>(dh)));

  std::vector<Var<T>> outs;
  outs.reserve(static_cast<size_t>(heads));
  for (int h = 0; h < heads; ++h) {
    const Var<T> qh = ad::slice_cols(q, h * dh, (h + 1) * dh);
    const Var<T> kh = ad::slice_cols(k, h * dh, (h + 1) * dh);
    const Var<T> vh = ad::slice_cols(v, h * dh, (h + 1) * dh);
    const Var<T> scores = ad::scale(ad::matmul(qh, ad::transpose2d(kh)), inv_sqrt);
    const Var<T> probs = ad::softmax_rows(scores);
    outs.push_back(ad::matmul(probs, vh));
  }
  return ad::concat_cols(outs);
}

// Multi-head self-attention with learned Q/K/V/output projections.
template <typename T>
class MHSA {
 public:
  MHSA() = default;
  MHSA(int64_t dim, int heads, Rng& rng)
      : wq(dim, dim, rng), wk(dim, dim, rng), wv(dim, dim, rng), wo(dim, dim, rng),
        heads_(heads) {}

  Var<T> forward(const Var<T>& x) const {
    return wo.forward(attention_heads(wq.forward(x), wk.forward(x), wv.forward(x), heads_));
  }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    wq.visit_params(prefix + ".wq", fn);
    wk.visit_params(prefix + ".wk", fn);
    wv.visit_params(prefix + ".wv", fn);
    wo.visit_params(prefix + ".wo", fn);
  }

  Linear<T> wq, wk, wv, wo;

 private:
  int heads_ = 8;
};

// Multi-head cross-attention: queries from q_src, keys/values from kv_src.
template <typename T>
class MHCA {
 public:
  MHCA() = default;
  MHCA(int64_t dim, int heads, Rng& rng)
      : wq(dim, dim, rng), wk(dim, dim, rng), wv(dim, dim, rng), wo(dim, dim, rng),
        heads_(heads) {}

  Var<T> forward(const Var<T>& q_src, const Var<T>& kv_src) const {
    if (q_src.dim(0) != kv_src.dim(0) || q_src.dim(1) != kv_src.dim(1))
      throw ShapeError("mhca: sequence shapes differ: " + shape_str(q_src.shape()) +
                       " vs " + shape_str(kv_src.shape()));
    return wo.forward(attention_heads(wq.forward(q_src), wk.forward(kv_src),
                                      wv.forward(kv_src), heads_));
  }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    wq.visit_params(prefix + ".wq", fn);
    wk.visit_params(prefix + ".wk", fn);
    wv.visit_params(prefix + ".wv", fn);
    wo.visit_params(prefix + ".wo", fn);
  }

  Linear<T> wq, wk, wv, wo;

 private:
  int heads_ = 8;
};

}  // namespace seldkit::nn
