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

#include <cmath>
#include <vector>

#include "seldkit/ad/graph.hpp"
#include "seldkit/common.hpp"

namespace seldkit::ad {

namespace detail {

template <typename T>
void axpy(Array<T>& dst, const T* src, int64_t n) {
  T* d = dst.data();
  for (int64_t i = 0; i < n; ++i) d[i] += src[i];
}

}  // namespace detail

// ---- elementwise -----------------------------------------------------------

template <typename T>
Var<T> add(const Var<T>& a, const Var<T>& b) {
  check_same_shape(a.value(), b.value(), "add");
  Array<T> v(a.shape());
  const T* pa = a.value().data();
  const T* pb = b.value().data();
  for (int64_t i = 0; i < v.size(); ++i) v[i] = pa[i] + pb[i];
  return Var<T>::make(std::move(v), {a, b}, [a, b](Node<T>& n) mutable {
    const T* g = n.grad.data();
    if (a.requires_grad()) detail::axpy(a.grad(), g, n.grad.size());
    if (b.requires_grad()) detail::axpy(b.grad(), g, n.grad.size());
  });
}

template <typename T>
Var<T> sub(const Var<T>& a, const Var<T>& b) {
  check_same_shape(a.value(), b.value(), "sub");
  Array<T> v(a.shape());
  const T* pa = a.value().data();
  const T* pb = b.value().data();
  for (int64_t i = 0; i < v.size(); ++i) v[i] = pa[i] - pb[i];
  return Var<T>::make(std::move(v), {a, b}, [a, b](Node<T>& n) mutable {
    const T* g = n.grad.data();
    if (a.requires_grad()) detail::axpy(a.grad(), g, n.grad.size());
    if (b.requires_grad()) {
      T* gb = b.grad().data();
      for (int64_t i = 0; i < n.grad.size(); ++i) gb[i] -= g[i];
    }
  });
}

template <typename T>
Var<T> mul(const Var<T>& a, const Var<T>& b) {
  check_same_shape(a.value(), b.value(), "mul");
  Array<T> v(a.shape());
  const T* pa = a.value().data();
  const T* pb = b.value().data();
  for (int64_t i = 0; i < v.size(); ++i) v[i] = pa[i] * pb[i];
  return Var<T>::make(std::move(v), {a, b}, [a, b](Node<T>& n) mutable {
    const T* g = n.grad.data();
    const T* pa = a.value().data();
    const T* pb = b.value().data();
    if (a.requires_grad()) {
      T* ga = a.grad().data();
      for (int64_t i = 0; i < n.grad.size(); ++i) ga[i] += g[i] * pb[i];
    }
    if (b.requires_grad()) {
      T* gb = b.grad().data();
      for (int64_t i = 0; i < n.grad.size(); ++i) gb[i] += g[i] * pa[i];
    }
  });
}

template <typename T>
Var<T> scale(const Var<T>& a, T s) {
  Array<T> v(a.shape());
  const T* pa = a.value().data();
  for (int64_t i = 0; i < v.size(); ++i) v[i] = pa[i] * s;
  return Var<T>::make(std::move(v), {a}, [a, s](Node<T>& n) mutable {
    if (!a.requires_grad()) return;
    const T* g = n.grad.data();
    T* ga = a.grad().data();
    for (int64_t i = 0; i < n.grad.size(); ++i) ga[i] += g[i] * s;
  });
}

// x: [R x C], bias: [C], broadcast over rows.
template <typename T>
Var<T> add_bias(const Var<T>& x, const Var<T>& bias) {
  if (x.ndim() != 2 || bias.ndim() != 1 || bias.dim(0) != x.dim(1))
    throw ShapeError("add_bias: want [RxC] + [C], got " + shape_str(x.shape()) +
                     " + " + shape_str(bias.shape()));
  const int64_t R = x.dim(0), C = x.dim(1);
  Array<T> v(x.shape());
  const T* px = x.value().data();
  const T* pb = bias.value().data();
  for (int64_t r = 0; r < R; ++r)
    for (int64_t c = 0; c < C; ++c) v[r * C + c] = px[r * C + c] + pb[c];
  return Var<T>::make(std::move(v), {x, bias}, [x, bias, R, C](Node<T>& n) mutable {
    const T* g = n.grad.data();
    if (x.requires_grad()) detail::axpy(x.grad(), g, n.grad.size());
    if (bias.requires_grad()) {
      T* gb = bias.grad().data();
      for (int64_t r = 0; r < R; ++r)
        for (int64_t c = 0; c < C; ++c) gb[c] += g[r * C + c];
    }
  });
}

// ---- activations -----------------------------------------------------------

template <typename T>
Var<T> relu(const Var<T>& x) {
  Array<T> v(x.shape());
  const T* px = x.value().data();
  for (int64_t i = 0; i < v.size(); ++i) v[i] = px[i] > T(0) ? px[i] : T(0);
  return Var<T>::make(std::move(v), {x}, [x](Node<T>& n) mutable {
    if (!x.requires_grad()) return;
    const T* g = n.grad.data();
    const T* px = x.value().data();
    T* gx = x.grad().data();
    for (int64_t i = 0; i < n.grad.size(); ++i)
      if (px[i] > T(0)) gx[i] += g[i];
  });
}

template <typename T>
Var<T> tanh_op(const Var<T>& x) {
  Array<T> v(x.shape());
  const T* px = x.value().data();
  for (int64_t i = 0; i < v.size(); ++i) v[i] = std::tanh(px[i]);
  return Var<T>::make(std::move(v), {x}, [x](Node<T>& n) mutable {
    if (!x.requires_grad()) return;
    const T* g = n.grad.data();
    const T* y = n.value.data();
    T* gx = x.grad().data();
    for (int64_t i = 0; i < n.grad.size(); ++i) gx[i] += g[i] * (T(1) - y[i] * y[i]);
  });
}

template <typename T>
Var<T> sigmoid(const Var<T>& x) {
  Array<T> v(x.shape());
  const T* px = x.value().data();
  for (int64_t i = 0; i < v.size(); ++i) v[i] = T(1) / (T(1) + std::exp(-px[i]));
  return Var<T>::make(std::move(v), {x}, [x](Node<T>& n) mutable {
    if (!x.requires_grad()) return;
    const T* g = n.grad.data();
    const T* y = n.value.data();
    T* gx = x.grad().data();
    for (int64_t i = 0; i < n.grad.size(); ++i) gx[i] += g[i] * y[i] * (T(1) - y[i]);
  });
}

template <typename T>
Var<T> swish(const Var<T>& x) {
  Array<T> v(x.shape());
  const T* px = x.value().data();
  for (int64_t i = 0; i < v.size(); ++i) {
    const T s = T(1) / (T(1) + std::exp(-px[i]));
    v[i] = px[i] * s;
  }
  return Var<T>::make(std::move(v), {x}, [x](Node<T>& n) mutable {
    if (!x.requires_grad()) return;
    const T* g = n.grad.data();
    const T* px = x.value().data();
    T* gx = x.grad().data();
    for (int64_t i = 0; i < n.grad.size(); ++i) {
      const T s = T(1) / (T(1) + std::exp(-px[i]));
      gx[i] += g[i] * (s + px[i] * s * (T(1) - s));
    }
  });
}

// Gated linear unit over the last dimension of a 2D input: [R x 2C] -> [R x C].
template <typename T>
Var<T> glu(const Var<T>& x) {
  if (x.ndim() != 2 || x.dim(1) % 2 != 0)
    throw ShapeError("glu: want [R x 2C], got " + shape_str(x.shape()));
  const int64_t R = x.dim(0), C = x.dim(1) / 2;
  Array<T> v(Shape{R, C});
  const T* px = x.value().data();
  for (int64_t r = 0; r < R; ++r)
    for (int64_t c = 0; c < C; ++c) {
      const T a = px[r * 2 * C + c];
      const T b = px[r * 2 * C + C + c];
      v[r * C + c] = a / (T(1) + std::exp(-b));
    }
  return Var<T>::make(std::move(v), {x}, [x, R, C](Node<T>& n) mutable {
    if (!x.requires_grad()) return;
    const T* g = n.grad.data();
    const T* px = x.value().data();
    T* gx = x.grad().data();
    for (int64_t r = 0; r < R; ++r)
      for (int64_t c = 0; c < C; ++c) {
        const T a = px[r * 2 * C + c];
        const T b = px[r * 2 * C + C + c];
        const T s = T(1) / (T(1) + std::exp(-b));
        gx[r * 2 * C + c] += g[r * C + c] * s;
        gx[r * 2 * C + C + c] += g[r * C + c] * a * s * (T(1) - s);
      }
  });
}

// Inverted dropout; identity when not training or p == 0.
template <typename T>
Var<T> dropout(const Var<T>& x, double p, Rng& rng, bool training) {
  if (!training || p <= 0.0) return x;
  if (p >= 1.0) throw ConfigError("dropout: p must be < 1");
  const T keep = static_cast<T>(1.0 - p);
  auto mask = std::make_shared<std::vector<T>>(static_cast<size_t>(x.size()));
  Array<T> v(x.shape());
  const T* px = x.value().data();
  for (int64_t i = 0; i < v.size(); ++i) {
    const T m = rng.bernoulli(p) ? T(0) : T(1) / keep;
    (*mask)[static_cast<size_t>(i)] = m;
    v[i] = px[i] * m;
  }
  return Var<T>::make(std::move(v), {x}, [x, mask](Node<T>& n) mutable {
    if (!x.requires_grad()) return;
    const T* g = n.grad.data();
    T* gx = x.grad().data();
    for (int64_t i = 0; i < n.grad.size(); ++i)
      gx[i] += g[i] * (*mask)[static_cast<size_t>(i)];
  });
}

// ---- shape ops --------------------------------------------------------------

template <typename T>
Var<T> reshape(const Var<T>& x, Shape new_shape) {
  Array<T> v = x.value().reshaped(std::move(new_shape));
  return Var<T>::make(std::move(v), {x}, [x](Node<T>& n) mutable {
    if (x.requires_grad()) detail::axpy(x.grad(), n.grad.data(), n.grad.size());
  });
}

template <typename T>
Var<T> transpose2d(const Var<T>& x) {
  if (x.ndim() != 2) throw ShapeError("transpose2d: want 2D, got " + shape_str(x.shape()));
  const int64_t R = x.dim(0), C = x.dim(1);
  Array<T> v(Shape{C, R});
  const T* px = x.value().data();
  for (int64_t r = 0; r < R; ++r)
    for (int64_t c = 0; c < C; ++c) v[c * R + r] = px[r * C + c];
  return Var<T>::make(std::move(v), {x}, [x, R, C](Node<T>& n) mutable {
    if (!x.requires_grad()) return;
    const T* g = n.grad.data();
    T* gx = x.grad().data();
    for (int64_t r = 0; r < R; ++r)
      for (int64_t c = 0; c < C; ++c) gx[r * C + c] += g[c * R + r];
  });
}

template <typename T>
Var<T> slice_rows(const Var<T>& x, int64_t r0, int64_t r1) {
  if (x.ndim() != 2 || r0 < 0 || r1 > x.dim(0) || r0 >= r1)
    throw ShapeError("slice_rows: bad range");
  const int64_t C = x.dim(1);
  Array<T> v(Shape{r1 - r0, C});
  std::copy(x.value().data() + r0 * C, x.value().data() + r1 * C, v.data());
  return Var<T>::make(std::move(v), {x}, [x, r0, C](Node<T>& n) mutable {
    if (!x.requires_grad()) return;
    const T* g = n.grad.data();
    T* gx = x.grad().data() + r0 * C;
    for (int64_t i = 0; i < n.grad.size(); ++i) gx[i] += g[i];
  });
}

template <typename T>
Var<T> slice_cols(const Var<T>& x, int64_t c0, int64_t c1) {
  if (x.ndim() != 2 || c0 < 0 || c1 > x.dim(1) || c0 >= c1)
    throw ShapeError("slice_cols: bad range");
  const int64_t R = x.dim(0), C = x.dim(1), W = c1 - c0;
  Array<T> v(Shape{R, W});
  const T* px = x.value().data();
  for (int64_t r = 0; r < R; ++r)
    std::copy(px + r * C + c0, px + r * C + c1, v.data() + r * W);
  return Var<T>::make(std::move(v), {x}, [x, c0, R, C, W](Node<T>& n) mutable {
    if (!x.requires_grad()) return;
    const T* g = n.grad.data();
    T* gx = x.grad().data();
    for (int64_t r = 0; r < R; ++r)
      for (int64_t c = 0; c < W; ++c) gx[r * C + c0 + c] += g[r * W + c];
  });
}

template <typename T>
Var<T> concat_cols(const std::vector<Var<T>>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no inputs");
  const int64_t R = parts[0].dim(0);
  int64_t total = 0;
  for (const auto& p : parts) {
    if (p.ndim() != 2 || p.dim(0) != R)
      throw ShapeError("concat_cols: row mismatch");
    total += p.dim(1);
  }
  Array<T> v(Shape{R, total});
  int64_t off = 0;
  for (const auto& p : parts) {
    const int64_t C = p.dim(1);
    const T* src = p.value().data();
    for (int64_t r = 0; r < R; ++r)
      std::copy(src + r * C, src + (r + 1) * C, v.data() + r * total + off);
    off += C;
  }
  return Var<T>::make(std::move(v), parts, [parts, R, total](Node<T>& n) mutable {
    const T* g = n.grad.data();
    int64_t off = 0;
    for (auto& p : parts) {
      const int64_t C = p.dim(1);
      if (p.requires_grad()) {
        T* gx = p.grad().data();
        for (int64_t r = 0; r < R; ++r)
          for (int64_t c = 0; c < C; ++c) gx[r * C + c] += g[r * total + off + c];
      }
      off += C;
    }
  });
}

template <typename T>
Var<T> concat_cols(const Var<T>& a, const Var<T>& b) {
  return concat_cols(std::vector<Var<T>>{a, b});
}

template <typename T>
Var<T> concat_rows(const std::vector<Var<T>>& parts) {
  if (parts.empty()) throw ShapeError("concat_rows: no inputs");
  const int64_t C = parts[0].dim(1);
  int64_t total = 0;
  for (const auto& p : parts) {
    if (p.ndim() != 2 || p.dim(1) != C) throw ShapeError("concat_rows: column mismatch");
    total += p.dim(0);
  }
  Array<T> v(Shape{total, C});
  int64_t off = 0;
  for (const auto& p : parts) {
    std::copy(p.value().data(), p.value().data() + p.size(), v.data() + off);
    off += p.size();
  }
  return Var<T>::make(std::move(v), parts, [parts](Node<T>& n) mutable {
    const T* g = n.grad.data();
    int64_t off = 0;
    for (auto& p : parts) {
      if (p.requires_grad()) detail::axpy(p.grad(), g + off, p.size());
      off += p.size();
    }
  });
}

// ---- reductions -------------------------------------------------------------

template <typename T>
Var<T> mean_all(const Var<T>& x) {
  Array<T> v(Shape{1});
  const T* px = x.value().data();
  double acc = 0;
  for (int64_t i = 0; i < x.size(); ++i) acc += static_cast<double>(px[i]);
  v[0] = static_cast<T>(acc / static_cast<double>(x.size()));
  const T inv = T(1) / static_cast<T>(x.size());
  return Var<T>::make(std::move(v), {x}, [x, inv](Node<T>& n) mutable {
    if (!x.requires_grad()) return;
    const T g = n.grad[0] * inv;
    T* gx = x.grad().data();
    for (int64_t i = 0; i < x.size(); ++i) gx[i] += g;
  });
}

// ---- matmul -----------------------------------------------------------------

template <typename T>
Var<T> matmul(const Var<T>& a, const Var<T>& b) {
  if (a.ndim() != 2 || b.ndim() != 2 || a.dim(1) != b.dim(0))
    throw ShapeError("matmul: " + shape_str(a.shape()) + " x " + shape_str(b.shape()));
  const int64_t M = a.dim(0), K = a.dim(1), N = b.dim(1);
  Array<T> v(Shape{M, N});
  {
    const T* pa = a.value().data();
    const T* pb = b.value().data();
    T* pc = v.data();
#pragma omp parallel for schedule(static) if (M * K * N > 65536)
    for (int64_t i = 0; i < M; ++i) {
      T* crow = pc + i * N;
      for (int64_t k = 0; k < K; ++k) {
        const T av = pa[i * K + k];
        const T* brow = pb + k * N;
        for (int64_t j = 0; j < N; ++j) crow[j] += av * brow[j];
      }
    }
  }
  return Var<T>::make(std::move(v), {a, b}, [a, b, M, K, N](Node<T>& n) mutable {
    const T* g = n.grad.data();
    if (a.requires_grad()) {
      // dA = dC * B^T
      const T* pb = b.value().data();
      T* ga = a.grad().data();
#pragma omp parallel for schedule(static) if (M * K * N > 65536)
      for (int64_t i = 0; i < M; ++i)
        for (int64_t k = 0; k < K; ++k) {
          const T* grow = g + i * N;
          const T* brow = pb + k * N;
          T acc = T(0);
          for (int64_t j = 0; j < N; ++j) acc += grow[j] * brow[j];
          ga[i * K + k] += acc;
        }
    }
    if (b.requires_grad()) {
      // dB = A^T * dC
      const T* pa = a.value().data();
      T* gb = b.grad().data();
#pragma omp parallel for schedule(static) if (M * K * N > 65536)
      for (int64_t k = 0; k < K; ++k)
        for (int64_t i = 0; i < M; ++i) {
          const T av = pa[i * K + k];
          const T* grow = g + i * N;
          T* brow = gb + k * N;
          for (int64_t j = 0; j < N; ++j) brow[j] += av * grow[j];
        }
    }
  });
}

// ---- softmax / normalization -------------------------------------------------

// Row-wise softmax of a 2D input.
template <typename T>
Var<T> softmax_rows(const Var<T>& x) {
  if (x.ndim() != 2) throw ShapeError("softmax_rows: want 2D, got " + shape_str(x.shape()));
  const int64_t R = x.dim(0), C = x.dim(1);
  Array<T> v(x.shape());
  const T* px = x.value().data();
  for (int64_t r = 0; r < R; ++r) {
    const T* xr = px + r * C;
    T* vr = v.data() + r * C;
    T mx = xr[0];
    for (int64_t c = 1; c < C; ++c) mx = std::max(mx, xr[c]);
    double sum = 0;
    for (int64_t c = 0; c < C; ++c) {
      vr[c] = std::exp(xr[c] - mx);
      sum += static_cast<double>(vr[c]);
    }
    const T inv = static_cast<T>(1.0 / sum);
    for (int64_t c = 0; c < C; ++c) vr[c] *= inv;
  }
  return Var<T>::make(std::move(v), {x}, [x, R, C](Node<T>& n) mutable {
    if (!x.requires_grad()) return;
    const T* g = n.grad.data();
    const T* y = n.value.data();
    T* gx = x.grad().data();
    for (int64_t r = 0; r < R; ++r) {
      const T* gr = g + r * C;
      const T* yr = y + r * C;
      T dot = T(0);
      for (int64_t c = 0; c < C; ++c) dot += gr[c] * yr[c];
      T* gxr = gx + r * C;
      for (int64_t c = 0; c < C; ++c) gxr[c] += yr[c] * (gr[c] - dot);
    }
  });
}

// Row-wise layer normalization with learned gain/offset: x [R x C],
// gamma/beta [C]. Variance is the biased estimate.
template <typename T>
Var<T> layer_norm(const Var<T>& x, const Var<T>& gamma, const Var<T>& beta,
                  T eps = T(1e-5)) {
  if (x.ndim() != 2 || gamma.ndim() != 1 || beta.ndim() != 1 ||
      gamma.dim(0) != x.dim(1) || beta.dim(0) != x.dim(1))
    throw ShapeError("layer_norm: want x [RxC], gamma/beta [C]");
  const int64_t R = x.dim(0), C = x.dim(1);
  Array<T> v(x.shape());
  auto xhat = std::make_shared<Array<T>>(x.shape());
  auto inv_std = std::make_shared<std::vector<T>>(static_cast<size_t>(R));
  const T* px = x.value().data();
  const T* pg = gamma.value().data();
  const T* pb = beta.value().data();
  for (int64_t r = 0; r < R; ++r) {
    const T* xr = px + r * C;
    double mu = 0;
    for (int64_t c = 0; c < C; ++c) mu += static_cast<double>(xr[c]);
    mu /= static_cast<double>(C);
    double var = 0;
    for (int64_t c = 0; c < C; ++c) {
      const double d = static_cast<double>(xr[c]) - mu;
      var += d * d;
    }
    var /= static_cast<double>(C);
    const T istd = static_cast<T>(1.0 / std::sqrt(var + static_cast<double>(eps)));
    (*inv_std)[static_cast<size_t>(r)] = istd;
    for (int64_t c = 0; c < C; ++c) {
      const T xh = (xr[c] - static_cast<T>(mu)) * istd;
      (*xhat)[r * C + c] = xh;
      v[r * C + c] = pg[c] * xh + pb[c];
    }
  }
  return Var<T>::make(std::move(v), {x, gamma, beta},
                      [x, gamma, beta, xhat, inv_std, R, C](Node<T>& n) mutable {
    const T* g = n.grad.data();
    const T* pg = gamma.value().data();
    if (gamma.requires_grad()) {
      T* gg = gamma.grad().data();
      for (int64_t r = 0; r < R; ++r)
        for (int64_t c = 0; c < C; ++c) gg[c] += g[r * C + c] * (*xhat)[r * C + c];
    }
    if (beta.requires_grad()) {
      T* gb = beta.grad().data();
      for (int64_t r = 0; r < R; ++r)
        for (int64_t c = 0; c < C; ++c) gb[c] += g[r * C + c];
    }
    if (x.requires_grad()) {
      T* gx = x.grad().data();
      for (int64_t r = 0; r < R; ++r) {
        const T istd = (*inv_std)[static_cast<size_t>(r)];
        double m1 = 0, m2 = 0;  // mean(dxhat), mean(dxhat * xhat)
        for (int64_t c = 0; c < C; ++c) {
          const T dxh = g[r * C + c] * pg[c];
          m1 += static_cast<double>(dxh);
          m2 += static_cast<double>(dxh) * static_cast<double>((*xhat)[r * C + c]);
        }
        m1 /= static_cast<double>(C);
        m2 /= static_cast<double>(C);
        for (int64_t c = 0; c < C; ++c) {
          const T dxh = g[r * C + c] * pg[c];
          gx[r * C + c] += istd * (dxh - static_cast<T>(m1) -
                                   (*xhat)[r * C + c] * static_cast<T>(m2));
        }
      }
    }
  });
}

// Sinusoidal absolute positional encoding table [T x D].
template <typename T>
Array<T> positional_encoding(int64_t steps, int64_t dim) {
  Array<T> pe(Shape{steps, dim});
  for (int64_t t = 0; t < steps; ++t)
    for (int64_t i = 0; i < dim; i += 2) {
      const double freq = std::pow(10000.0, static_cast<double>(i) / static_cast<double>(dim));
      pe[t * dim + i] = static_cast<T>(std::sin(t / freq));
      if (i + 1 < dim) pe[t * dim + i + 1] = static_cast<T>(std::cos(t / freq));
    }
  return pe;
}

}  // namespace seldkit::ad
