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

#include "seldkit/nn/attention.hpp"

namespace seldkit::nn {

// Pre-norm feed-forward sub-block: Linear(d, 4d) -> swish -> dropout ->
// Linear(4d, d) -> dropout.
template <typename T>
class ConformerFFN {
 public:
  ConformerFFN() = default;
  ConformerFFN(int64_t dim, double dropout, Rng& rng)
      : norm(dim), in(dim, 4 * dim, rng), out(4 * dim, dim, rng), dropout_(dropout) {}

  Var<T> forward(const Var<T>& x, const Ctx& ctx) const {
    Var<T> h = ad::swish(in.forward(norm.forward(x)));
    h = apply_dropout(h, dropout_, ctx);
    return apply_dropout(out.forward(h), dropout_, ctx);
  }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    norm.visit_params(prefix + ".norm", fn);
    in.visit_params(prefix + ".in", fn);
    out.visit_params(prefix + ".out", fn);
  }

  LayerNorm<T> norm;
  Linear<T> in, out;

 private:
  double dropout_ = 0.0;
};

// Convolution sub-block: LN -> pointwise (d -> 2d) -> GLU -> depthwise conv
// (kernel 51, zero same-padding) -> batch norm over time -> swish ->
// pointwise (d -> d) -> dropout.
template <typename T>
class ConformerConvModule {
 public:
  ConformerConvModule() = default;
  ConformerConvModule(int64_t dim, int kernel, double dropout, Rng& rng)
      : norm(dim),
        pointwise_in(dim, 2 * dim, rng),
        depthwise(Var<T>::leaf(init_uniform<T>(Shape{dim, kernel}, kernel, rng))),
        depthwise_bias(Var<T>::leaf(Array<T>(Shape{dim}))),
        bn(dim),
        pointwise_out(dim, dim, rng),
        dropout_(dropout) {}

  Var<T> forward(const Var<T>& x, const Ctx& ctx) const {
    Var<T> h = ad::glu(pointwise_in.forward(norm.forward(x)));
    h = ad::depthwise_conv1d(h, depthwise, depthwise_bias);
    h = ad::swish(bn.forward(h, ctx));
    return apply_dropout(pointwise_out.forward(h), dropout_, ctx);
  }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    norm.visit_params(prefix + ".norm", fn);
    pointwise_in.visit_params(prefix + ".pw_in", fn);
    fn(prefix + ".depthwise.weight", depthwise);
    fn(prefix + ".depthwise.bias", depthwise_bias);
    bn.visit_params(prefix + ".bn", fn);
    pointwise_out.visit_params(prefix + ".pw_out", fn);
  }

  LayerNorm<T> norm;
  Linear<T> pointwise_in;
  Var<T> depthwise, depthwise_bias;
  BatchNormTime<T> bn;
  Linear<T> pointwise_out;

 private:
  double dropout_ = 0.0;
};

// Macaron conformer block: half-weighted FFN, MHSA, convolution module,
// half-weighted FFN, each with a residual connection, then a final layer
// norm.
template <typename T>
class ConformerBlock {
 public:
  ConformerBlock() = default;
  ConformerBlock(int64_t dim, int heads, int kernel, double dropout, Rng& rng)
      : ffn1(dim, dropout, rng),
        attn_norm(dim),
        attn(dim, heads, rng),
        conv(dim, kernel, dropout, rng),
        ffn2(dim, dropout, rng),
        final_norm(dim),
        dropout_(dropout) {}

  Var<T> forward(const Var<T>& x, const Ctx& ctx) const {
    if (x.ndim() != 2 || x.dim(0) < 1)
      throw InputError("conformer: need a [T x D] sequence with T >= 1");
    Var<T> h = ad::add(x, ad::scale(ffn1.forward(x, ctx), T(0.5)));
    h = ad::add(h, apply_dropout(attn.forward(attn_norm.forward(h)), dropout_, ctx));
    h = ad::add(h, conv.forward(h, ctx));
    h = ad::add(h, ad::scale(ffn2.forward(h, ctx), T(0.5)));
    return final_norm.forward(h);
  }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    ffn1.visit_params(prefix + ".ffn1", fn);
    attn_norm.visit_params(prefix + ".attn_norm", fn);
    attn.visit_params(prefix + ".attn", fn);
    conv.visit_params(prefix + ".conv", fn);
    ffn2.visit_params(prefix + ".ffn2", fn);
    final_norm.visit_params(prefix + ".final_norm", fn);
  }

  ConformerFFN<T> ffn1;
  LayerNorm<T> attn_norm;
  MHSA<T> attn;
  ConformerConvModule<T> conv;
  ConformerFFN<T> ffn2;
  LayerNorm<T> final_norm;

 private:
  double dropout_ = 0.0;
};

// Stack of conformer blocks with sinusoidal positional encoding added at the
// module input.
template <typename T>
class ConformerStack {
 public:
  ConformerStack() = default;
  ConformerStack(int64_t dim, int layers, int heads, int kernel, double dropout,
                 Rng& rng)
      : dim_(dim) {
    blocks.reserve(static_cast<size_t>(layers));
    for (int i = 0; i < layers; ++i) blocks.emplace_back(dim, heads, kernel, dropout, rng);
  }

  Var<T> forward(const Var<T>& x, const Ctx& ctx) const {
    Var<T> h = ad::add(x, Var<T>::constant(ad::positional_encoding<T>(x.dim(0), dim_)));
    for (const auto& b : blocks) h = b.forward(h, ctx);
    return h;
  }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    for (size_t i = 0; i < blocks.size(); ++i)
      blocks[i].visit_params(prefix + ".block" + std::to_string(i), fn);
  }

  std::vector<ConformerBlock<T>> blocks;

 private:
  int64_t dim_ = 0;
};

}  // namespace seldkit::nn
