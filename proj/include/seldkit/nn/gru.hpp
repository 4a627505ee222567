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

// Standard GRU cell, gate layout (r, z, n):
//   r = sigmoid(Wr x + br + Ur h + cr)
//   z = sigmoid(Wz x + bz + Uz h + cz)
//   n = tanh(Wn x + bn + r .* (Un h + cn))
//   h' = (1 - z) .* n + z .* h
template <typename T>
class GRUCell {
 public:
  GRUCell() = default;
  GRUCell(int64_t in, int64_t hidden, Rng& rng)
      : wx(Var<T>::leaf(init_uniform<T>(Shape{in, 3 * hidden}, in, rng))),
        bx(Var<T>::leaf(Array<T>(Shape{3 * hidden}))),
        wh(Var<T>::leaf(init_uniform<T>(Shape{hidden, 3 * hidden}, hidden, rng))),
        bh(Var<T>::leaf(Array<T>(Shape{3 * hidden}))),
        hidden_(hidden) {}

  // x_t: [1 x in], h: [1 x hidden] -> [1 x hidden]
  Var<T> step(const Var<T>& x_t, const Var<T>& h) const {
    const int64_t H = hidden_;
    const Var<T> gx = ad::add_bias(ad::matmul(x_t, wx), bx);
    const Var<T> gh = ad::add_bias(ad::matmul(h, wh), bh);
    const Var<T> r = ad::sigmoid(ad::add(ad::slice_cols(gx, 0, H), ad::slice_cols(gh, 0, H)));
    const Var<T> z =
        ad::sigmoid(ad::add(ad::slice_cols(gx, H, 2 * H), ad::slice_cols(gh, H, 2 * H)));
    const Var<T> n = ad::tanh_op(
        ad::add(ad::slice_cols(gx, 2 * H, 3 * H), ad::mul(r, ad::slice_cols(gh, 2 * H, 3 * H))));
    // h' = n - z.*n + z.*h
    return ad::add(ad::sub(n, ad::mul(z, n)), ad::mul(z, h));
  }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    fn(prefix + ".wx", wx);
    fn(prefix + ".bx", bx);
    fn(prefix + ".wh", wh);
    fn(prefix + ".bh", bh);
  }

  Var<T> wx, bx, wh, bh;
  int64_t hidden() const { return hidden_; }

 private:
  int64_t hidden_ = 0;
};

// Bidirectional GRU: per layer, a forward and a backward pass over time whose
// states are concatenated per step, so the output width is 2 * hidden.
template <typename T>
class BiGRU {
 public:
  BiGRU() = default;
  BiGRU(int64_t in, int64_t hidden, int layers, Rng& rng) {
    int64_t width = in;
    for (int l = 0; l < layers; ++l) {
      fwd.emplace_back(width, hidden, rng);
      bwd.emplace_back(width, hidden, rng);
      width = 2 * hidden;
    }
  }

  Var<T> forward(const Var<T>& x) const {
    if (x.ndim() != 2) throw ShapeError("bigru: want [T x D]");
    Var<T> h = x;
    for (size_t l = 0; l < fwd.size(); ++l) h = layer(h, fwd[l], bwd[l]);
    return h;
  }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    for (size_t l = 0; l < fwd.size(); ++l) {
      fwd[l].visit_params(prefix + ".l" + std::to_string(l) + ".fwd", fn);
      bwd[l].visit_params(prefix + ".l" + std::to_string(l) + ".bwd", fn);
    }
  }

  std::vector<GRUCell<T>> fwd, bwd;

 private:
  static Var<T> layer(const Var<T>& x, const GRUCell<T>& f, const GRUCell<T>& b) {
    const int64_t Tn = x.dim(0), H = f.hidden();
    std::vector<Var<T>> fs(static_cast<size_t>(Tn)), bs(static_cast<size_t>(Tn));
    Var<T> h = Var<T>::constant(Array<T>(Shape{1, H}));
    for (int64_t t = 0; t < Tn; ++t) {
      h = f.step(ad::slice_rows(x, t, t + 1), h);
      fs[static_cast<size_t>(t)] = h;
    }
    h = Var<T>::constant(Array<T>(Shape{1, H}));
    for (int64_t t = Tn - 1; t >= 0; --t) {
      h = b.step(ad::slice_rows(x, t, t + 1), h);
      bs[static_cast<size_t>(t)] = h;
    }
    std::vector<Var<T>> rows;
    rows.reserve(static_cast<size_t>(Tn));
    for (int64_t t = 0; t < Tn; ++t)
      rows.push_back(ad::concat_cols(fs[static_cast<size_t>(t)], bs[static_cast<size_t>(t)]));
    return ad::concat_rows(rows);
  }
};

}  // namespace seldkit::nn
