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

#include <memory>

#include "seldkit/ad/ops.hpp"

namespace seldkit::ad {

// 2D convolution: x [Cin x H x W], w [Cout x Cin x KH x KW], bias [Cout].
// Output [Cout x OH x OW] with OH = (H + 2p - KH)/s + 1. Parallelism is
// partitioned over independent output/input channels so results are
// bit-stable regardless of thread count.
template <typename T>
Var<T> conv2d(const Var<T>& x, const Var<T>& w, const Var<T>& bias, int stride = 1,
              int pad = 0) {
  if (x.ndim() != 3 || w.ndim() != 4 || x.dim(0) != w.dim(1))
    throw ShapeError("conv2d: x " + shape_str(x.shape()) + " w " + shape_str(w.shape()));
  if (bias.ndim() != 1 || bias.dim(0) != w.dim(0))
    throw ShapeError("conv2d: bias shape " + shape_str(bias.shape()));
  if (stride < 1) throw ConfigError("conv2d: stride must be >= 1");
  const int64_t Cin = x.dim(0), H = x.dim(1), W = x.dim(2);
  const int64_t Cout = w.dim(0), KH = w.dim(2), KW = w.dim(3);
  const int64_t OH = (H + 2 * pad - KH) / stride + 1;
  const int64_t OW = (W + 2 * pad - KW) / stride + 1;
  if (OH < 1 || OW < 1) throw ShapeError("conv2d: kernel larger than padded input");

  Array<T> v(Shape{Cout, OH, OW});
  {
    const T* px = x.value().data();
    const T* pw = w.value().data();
    const T* pb = bias.value().data();
    T* py = v.data();
#pragma omp parallel for schedule(static)
    for (int64_t co = 0; co < Cout; ++co) {
      T* yc = py + co * OH * OW;
      for (int64_t i = 0; i < OH * OW; ++i) yc[i] = pb[co];
      for (int64_t ci = 0; ci < Cin; ++ci)
        for (int64_t kh = 0; kh < KH; ++kh)
          for (int64_t kw = 0; kw < KW; ++kw) {
            const T wv = pw[((co * Cin + ci) * KH + kh) * KW + kw];
            for (int64_t oh = 0; oh < OH; ++oh) {
              const int64_t ih = oh * stride - pad + kh;
              if (ih < 0 || ih >= H) continue;
              const T* xrow = px + (ci * H + ih) * W;
              T* yrow = yc + oh * OW;
              for (int64_t ow = 0; ow < OW; ++ow) {
                const int64_t iw = ow * stride - pad + kw;
                if (iw >= 0 && iw < W) yrow[ow] += wv * xrow[iw];
              }
            }
          }
    }
  }
  return Var<T>::make(
      std::move(v), {x, w, bias},
      [x, w, bias, Cin, H, W, Cout, KH, KW, OH, OW, stride, pad](Node<T>& n) mutable {
        const T* g = n.grad.data();
        if (bias.requires_grad()) {
          T* gb = bias.grad().data();
          for (int64_t co = 0; co < Cout; ++co) {
            const T* gc = g + co * OH * OW;
            T acc = T(0);
            for (int64_t i = 0; i < OH * OW; ++i) acc += gc[i];
            gb[co] += acc;
          }
        }
        if (w.requires_grad()) {
          const T* px = x.value().data();
          T* gw = w.grad().data();
#pragma omp parallel for schedule(static)
          for (int64_t co = 0; co < Cout; ++co)
            for (int64_t ci = 0; ci < Cin; ++ci)
              for (int64_t kh = 0; kh < KH; ++kh)
                for (int64_t kw = 0; kw < KW; ++kw) {
                  T acc = T(0);
                  for (int64_t oh = 0; oh < OH; ++oh) {
                    const int64_t ih = oh * stride - pad + kh;
                    if (ih < 0 || ih >= H) continue;
                    const T* xrow = px + (ci * H + ih) * W;
                    const T* grow = g + (co * OH + oh) * OW;
                    for (int64_t ow = 0; ow < OW; ++ow) {
                      const int64_t iw = ow * stride - pad + kw;
                      if (iw >= 0 && iw < W) acc += grow[ow] * xrow[iw];
                    }
                  }
                  gw[((co * Cin + ci) * KH + kh) * KW + kw] += acc;
                }
        }
        if (x.requires_grad()) {
          const T* pw = w.value().data();
          T* gx = x.grad().data();
#pragma omp parallel for schedule(static)
          for (int64_t ci = 0; ci < Cin; ++ci)
            for (int64_t co = 0; co < Cout; ++co)
              for (int64_t kh = 0; kh < KH; ++kh)
                for (int64_t kw = 0; kw < KW; ++kw) {
                  const T wv = pw[((co * Cin + ci) * KH + kh) * KW + kw];
                  for (int64_t oh = 0; oh < OH; ++oh) {
                    const int64_t ih = oh * stride - pad + kh;
                    if (ih < 0 || ih >= H) continue;
                    T* gxrow = gx + (ci * H + ih) * W;
                    const T* grow = g + (co * OH + oh) * OW;
                    for (int64_t ow = 0; ow < OW; ++ow) {
                      const int64_t iw = ow * stride - pad + kw;
                      if (iw >= 0 && iw < W) gxrow[iw] += wv * grow[ow];
                    }
                  }
                }
        }
      });
}

// k x k average pooling with stride k: [C x H x W] -> [C x H/k x W/k].
template <typename T>
Var<T> avg_pool2d(const Var<T>& x, int k) {
  if (x.ndim() != 3) throw ShapeError("avg_pool2d: want [CxHxW]");
  if (k < 1 || x.dim(1) % k != 0 || x.dim(2) % k != 0)
    throw ShapeError("avg_pool2d: dimensions must be divisible by k");
  const int64_t C = x.dim(0), H = x.dim(1), W = x.dim(2);
  const int64_t OH = H / k, OW = W / k;
  const T inv = T(1) / static_cast<T>(k * k);

  Array<T> v(Shape{C, OH, OW});
  const T* px = x.value().data();
  for (int64_t c = 0; c < C; ++c)
    for (int64_t oh = 0; oh < OH; ++oh)
      for (int64_t ow = 0; ow < OW; ++ow) {
        T acc = T(0);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j)
            acc += px[(c * H + oh * k + i) * W + ow * k + j];
        v[(c * OH + oh) * OW + ow] = acc * inv;
      }
  return Var<T>::make(std::move(v), {x}, [x, C, H, W, OH, OW, k, inv](Node<T>& n) mutable {
    if (!x.requires_grad()) return;
    const T* g = n.grad.data();
    T* gx = x.grad().data();
    for (int64_t c = 0; c < C; ++c)
      for (int64_t oh = 0; oh < OH; ++oh)
        for (int64_t ow = 0; ow < OW; ++ow) {
          const T gv = g[(c * OH + oh) * OW + ow] * inv;
          for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
              gx[(c * H + oh * k + i) * W + ow * k + j] += gv;
        }
  });
}

// Global average pool: [C x H x W] -> [C].
template <typename T>
Var<T> global_avg_pool(const Var<T>& x) {
  if (x.ndim() != 3) throw ShapeError("global_avg_pool: want [CxHxW]");
  const int64_t C = x.dim(0), L = x.dim(1) * x.dim(2);
  Array<T> v(Shape{C});
  const T* px = x.value().data();
  for (int64_t c = 0; c < C; ++c) {
    double acc = 0;
    for (int64_t i = 0; i < L; ++i) acc += static_cast<double>(px[c * L + i]);
    v[c] = static_cast<T>(acc / static_cast<double>(L));
  }
  return Var<T>::make(std::move(v), {x}, [x, C, L](Node<T>& n) mutable {
    if (!x.requires_grad()) return;
    const T* g = n.grad.data();
    T* gx = x.grad().data();
    const T inv = T(1) / static_cast<T>(L);
    for (int64_t c = 0; c < C; ++c)
      for (int64_t i = 0; i < L; ++i) gx[c * L + i] += g[c] * inv;
  });
}

// Frequency average pooling + layout change: [C x H x W] -> [H x C],
// y[h,c] = mean_w x[c,h,w]. Collapses the spectral axis of the CNN output
// into a time-major embedding.
template <typename T>
Var<T> freq_mean(const Var<T>& x) {
  if (x.ndim() != 3) throw ShapeError("freq_mean: want [CxHxW]");
  const int64_t C = x.dim(0), H = x.dim(1), W = x.dim(2);
  Array<T> v(Shape{H, C});
  const T* px = x.value().data();
  const T inv = T(1) / static_cast<T>(W);
  for (int64_t c = 0; c < C; ++c)
    for (int64_t h = 0; h < H; ++h) {
      T acc = T(0);
      for (int64_t w0 = 0; w0 < W; ++w0) acc += px[(c * H + h) * W + w0];
      v[h * C + c] = acc * inv;
    }
  return Var<T>::make(std::move(v), {x}, [x, C, H, W, inv](Node<T>& n) mutable {
    if (!x.requires_grad()) return;
    const T* g = n.grad.data();
    T* gx = x.grad().data();
    for (int64_t c = 0; c < C; ++c)
      for (int64_t h = 0; h < H; ++h) {
        const T gv = g[h * C + c] * inv;
        for (int64_t w0 = 0; w0 < W; ++w0) gx[(c * H + h) * W + w0] += gv;
      }
  });
}

// Per-channel depthwise 1D convolution over time with zero same-padding:
// x [T x D], w [D x K], bias [D].
template <typename T>
Var<T> depthwise_conv1d(const Var<T>& x, const Var<T>& w, const Var<T>& bias) {
  if (x.ndim() != 2 || w.ndim() != 2 || w.dim(0) != x.dim(1))
    throw ShapeError("depthwise_conv1d: x " + shape_str(x.shape()) + " w " +
                     shape_str(w.shape()));
  const int64_t Tn = x.dim(0), D = x.dim(1), K = w.dim(1);
  const int64_t half = K / 2;
  Array<T> v(Shape{Tn, D});
  {
    const T* px = x.value().data();
    const T* pw = w.value().data();
    const T* pb = bias.value().data();
    for (int64_t t = 0; t < Tn; ++t) {
      T* yr = v.data() + t * D;
      for (int64_t d = 0; d < D; ++d) yr[d] = pb[d];
      for (int64_t k = 0; k < K; ++k) {
        const int64_t tt = t + k - half;
        if (tt < 0 || tt >= Tn) continue;
        const T* xr = px + tt * D;
        for (int64_t d = 0; d < D; ++d) yr[d] += xr[d] * pw[d * K + k];
      }
    }
  }
  return Var<T>::make(std::move(v), {x, w, bias},
                      [x, w, bias, Tn, D, K, half](Node<T>& n) mutable {
    const T* g = n.grad.data();
    if (bias.requires_grad()) {
      T* gb = bias.grad().data();
      for (int64_t t = 0; t < Tn; ++t)
        for (int64_t d = 0; d < D; ++d) gb[d] += g[t * D + d];
    }
    if (w.requires_grad()) {
      const T* px = x.value().data();
      T* gw = w.grad().data();
      for (int64_t t = 0; t < Tn; ++t)
        for (int64_t k = 0; k < K; ++k) {
          const int64_t tt = t + k - half;
          if (tt < 0 || tt >= Tn) continue;
          const T* xr = px + tt * D;
          const T* gr = g + t * D;
          for (int64_t d = 0; d < D; ++d) gw[d * K + k] += gr[d] * xr[d];
        }
    }
    if (x.requires_grad()) {
      const T* pw = w.value().data();
      T* gx = x.grad().data();
      for (int64_t t = 0; t < Tn; ++t)
        for (int64_t k = 0; k < K; ++k) {
          const int64_t tt = t + k - half;
          if (tt < 0 || tt >= Tn) continue;
          T* gxr = gx + tt * D;
          const T* gr = g + t * D;
          for (int64_t d = 0; d < D; ++d) gxr[d] += gr[d] * pw[d * K + k];
        }
    }
  });
}

// Running statistics owned by a BatchNorm layer.
template <typename T>
struct BnStats {
  Array<T> mean;
  Array<T> var;
  bool initialized = false;
};

namespace detail {

// Shared batch-norm kernel over a generic (channel, element) indexing:
// idx(c, i) gives the flat offset of element i of channel c; L elements per
// channel. Normalizes with batch statistics in training mode (updating the
// running stats), running statistics otherwise.
template <typename T, typename IndexFn>
Var<T> batch_norm_impl(const Var<T>& x, const Var<T>& gamma, const Var<T>& beta,
                       std::shared_ptr<BnStats<T>> stats, T momentum, T eps,
                       bool training, int64_t C, int64_t L, IndexFn idx) {
  const T* px = x.value().data();
  const T* pg = gamma.value().data();
  const T* pb = beta.value().data();

  auto xhat = std::make_shared<Array<T>>(x.value().shape());
  auto inv_std = std::make_shared<std::vector<T>>(static_cast<size_t>(C));
  Array<T> v(x.value().shape());

  for (int64_t c = 0; c < C; ++c) {
    double mu, var;
    if (training) {
      mu = 0;
      for (int64_t i = 0; i < L; ++i) mu += static_cast<double>(px[idx(c, i)]);
      mu /= static_cast<double>(L);
      var = 0;
      for (int64_t i = 0; i < L; ++i) {
        const double d = static_cast<double>(px[idx(c, i)]) - mu;
        var += d * d;
      }
      var /= static_cast<double>(L);
      if (!stats->initialized) {
        stats->mean[c] = static_cast<T>(mu);
        stats->var[c] = static_cast<T>(var);
      } else {
        stats->mean[c] = (T(1) - momentum) * stats->mean[c] + momentum * static_cast<T>(mu);
        stats->var[c] = (T(1) - momentum) * stats->var[c] + momentum * static_cast<T>(var);
      }
    } else {
      mu = static_cast<double>(stats->mean[c]);
      var = static_cast<double>(stats->var[c]);
    }
    const T istd = static_cast<T>(1.0 / std::sqrt(var + static_cast<double>(eps)));
    (*inv_std)[static_cast<size_t>(c)] = istd;
    for (int64_t i = 0; i < L; ++i) {
      const int64_t o = idx(c, i);
      const T xh = (px[o] - static_cast<T>(mu)) * istd;
      (*xhat)[o] = xh;
      v[o] = pg[c] * xh + pb[c];
    }
  }
  if (training) stats->initialized = true;

  return Var<T>::make(std::move(v), {x, gamma, beta},
                      [x, gamma, beta, xhat, inv_std, C, L, idx, training](Node<T>& n) mutable {
    const T* g = n.grad.data();
    const T* pg = gamma.value().data();
    if (gamma.requires_grad()) {
      T* gg = gamma.grad().data();
      for (int64_t c = 0; c < C; ++c) {
        T acc = T(0);
        for (int64_t i = 0; i < L; ++i) acc += g[idx(c, i)] * (*xhat)[idx(c, i)];
        gg[c] += acc;
      }
    }
    if (beta.requires_grad()) {
      T* gb = beta.grad().data();
      for (int64_t c = 0; c < C; ++c) {
        T acc = T(0);
        for (int64_t i = 0; i < L; ++i) acc += g[idx(c, i)];
        gb[c] += acc;
      }
    }
    if (x.requires_grad()) {
      T* gx = x.grad().data();
      for (int64_t c = 0; c < C; ++c) {
        const T istd = (*inv_std)[static_cast<size_t>(c)];
        if (training) {
          double m1 = 0, m2 = 0;
          for (int64_t i = 0; i < L; ++i) {
            const T dxh = g[idx(c, i)] * pg[c];
            m1 += static_cast<double>(dxh);
            m2 += static_cast<double>(dxh) * static_cast<double>((*xhat)[idx(c, i)]);
          }
          m1 /= static_cast<double>(L);
          m2 /= static_cast<double>(L);
          for (int64_t i = 0; i < L; ++i) {
            const int64_t o = idx(c, i);
            const T dxh = g[o] * pg[c];
            gx[o] += istd * (dxh - static_cast<T>(m1) - (*xhat)[o] * static_cast<T>(m2));
          }
        } else {
          // running stats are constants w.r.t. x
          for (int64_t i = 0; i < L; ++i) {
            const int64_t o = idx(c, i);
            gx[o] += g[o] * pg[c] * istd;
          }
        }
      }
    }
  });
}

}  // namespace detail

// Batch norm over the time axis of a [T x D] sequence (per-column stats).
template <typename T>
Var<T> batch_norm_time(const Var<T>& x, const Var<T>& gamma, const Var<T>& beta,
                       std::shared_ptr<BnStats<T>> stats, T momentum, T eps,
                       bool training) {
  if (x.ndim() != 2 || gamma.dim(0) != x.dim(1))
    throw ShapeError("batch_norm_time: want x [TxD], gamma [D]");
  const int64_t Tn = x.dim(0), D = x.dim(1);
  return detail::batch_norm_impl(x, gamma, beta, stats, momentum, eps, training, D, Tn,
                                 [D](int64_t c, int64_t i) { return i * D + c; });
}

// Batch norm over the spatial axes of a [C x H x W] map (per-channel stats).
template <typename T>
Var<T> batch_norm_2d(const Var<T>& x, const Var<T>& gamma, const Var<T>& beta,
                     std::shared_ptr<BnStats<T>> stats, T momentum, T eps,
                     bool training) {
  if (x.ndim() != 3 || gamma.dim(0) != x.dim(0))
    throw ShapeError("batch_norm_2d: want x [CxHxW], gamma [C]");
  const int64_t C = x.dim(0), L = x.dim(1) * x.dim(2);
  return detail::batch_norm_impl(x, gamma, beta, stats, momentum, eps, training, C, L,
                                 [L](int64_t c, int64_t i) { return c * L + i; });
}

}  // namespace seldkit::ad
