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
#include <string>

#include "seldkit/ad/conv.hpp"
#include "seldkit/ad/ops.hpp"
#include "seldkit/common.hpp"

namespace seldkit::nn {

using seldkit::ad::Var;

// Forward-pass context: training toggles dropout and batch-norm statistics;
// rng drives dropout masks (must be seeded by the caller).
struct Ctx {
  bool training = true;
  Rng* rng = nullptr;
};

template <typename T>
using ParamVisitor = std::function<void(const std::string&, Var<T>&)>;

// Uniform Kaiming-style fan-in init: U(-sqrt(1/fan_in), sqrt(1/fan_in)).
template <typename T>
Array<T> init_uniform(Shape shape, int64_t fan_in, Rng& rng) {
  Array<T> w(std::move(shape));
  const double bound = std::sqrt(1.0 / static_cast<double>(std::max<int64_t>(1, fan_in)));
  for (int64_t i = 0; i < w.size(); ++i)
    w[i] = static_cast<T>(rng.uniform(-bound, bound));
  return w;
}

template <typename T>
class Linear {
 public:
  Linear() = default;
  Linear(int64_t in, int64_t out, Rng& rng)
      : weight(Var<T>::leaf(init_uniform<T>(Shape{in, out}, in, rng))),
        bias(Var<T>::leaf(Array<T>(Shape{out}))) {}

  Var<T> forward(const Var<T>& x) const {
    return ad::add_bias(ad::matmul(x, weight), bias);
  }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    fn(prefix + ".weight", weight);
    fn(prefix + ".bias", bias);
  }

  Var<T> weight, bias;
};

template <typename T>
class LayerNorm {
 public:
  LayerNorm() = default;
  explicit LayerNorm(int64_t dim)
      : gamma(Var<T>::leaf(Array<T>::full(Shape{dim}, T(1)))),
        beta(Var<T>::leaf(Array<T>(Shape{dim}))) {}

  Var<T> forward(const Var<T>& x) const { return ad::layer_norm(x, gamma, beta); }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    fn(prefix + ".gamma", gamma);
    fn(prefix + ".beta", beta);
  }

  Var<T> gamma, beta;
};

template <typename T>
class BatchNormTime {
 public:
  BatchNormTime() = default;
  explicit BatchNormTime(int64_t dim)
      : gamma(Var<T>::leaf(Array<T>::full(Shape{dim}, T(1)))),
        beta(Var<T>::leaf(Array<T>(Shape{dim}))),
        stats(std::make_shared<ad::BnStats<T>>(
            ad::BnStats<T>{Array<T>(Shape{dim}), Array<T>::full(Shape{dim}, T(1)), false})) {}

  Var<T> forward(const Var<T>& x, const Ctx& ctx) const {
    return ad::batch_norm_time(x, gamma, beta, stats, momentum, eps, ctx.training);
  }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    fn(prefix + ".gamma", gamma);
    fn(prefix + ".beta", beta);
  }

  Var<T> gamma, beta;
  std::shared_ptr<ad::BnStats<T>> stats;
  T momentum = T(0.1);
  T eps = T(1e-5);
};

template <typename T>
class BatchNorm2d {
 public:
  BatchNorm2d() = default;
  explicit BatchNorm2d(int64_t channels)
      : gamma(Var<T>::leaf(Array<T>::full(Shape{channels}, T(1)))),
        beta(Var<T>::leaf(Array<T>(Shape{channels}))),
        stats(std::make_shared<ad::BnStats<T>>(ad::BnStats<T>{
            Array<T>(Shape{channels}), Array<T>::full(Shape{channels}, T(1)), false})) {}

  Var<T> forward(const Var<T>& x, const Ctx& ctx) const {
    return ad::batch_norm_2d(x, gamma, beta, stats, momentum, eps, ctx.training);
  }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    fn(prefix + ".gamma", gamma);
    fn(prefix + ".beta", beta);
  }

  Var<T> gamma, beta;
  std::shared_ptr<ad::BnStats<T>> stats;
  T momentum = T(0.1);
  T eps = T(1e-5);
};

template <typename T>
class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(int64_t in_ch, int64_t out_ch, int kernel, int stride, int pad, Rng& rng)
      : weight(Var<T>::leaf(
            init_uniform<T>(Shape{out_ch, in_ch, kernel, kernel}, in_ch * kernel * kernel, rng))),
        bias(Var<T>::leaf(Array<T>(Shape{out_ch}))),
        stride_(stride),
        pad_(pad) {}

  Var<T> forward(const Var<T>& x) const {
    return ad::conv2d(x, weight, bias, stride_, pad_);
  }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    fn(prefix + ".weight", weight);
    fn(prefix + ".bias", bias);
  }

  Var<T> weight, bias;

 private:
  int stride_ = 1, pad_ = 0;
};

template <typename T>
Var<T> apply_dropout(const Var<T>& x, double p, const Ctx& ctx) {
  if (!ctx.training || p <= 0.0) return x;
  if (!ctx.rng) throw ConfigError("dropout: training context has no rng");
  return ad::dropout(x, p, *ctx.rng, true);
}

}  // namespace seldkit::nn
