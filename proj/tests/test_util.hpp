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
#include <functional>
#include <vector>

#include "seldkit/ad/graph.hpp"
#include "seldkit/common.hpp"

namespace seldkit::testing {

// Central finite differences (h = 1e-5, double precision) against reverse-mode
// gradients. `forward` must rebuild the whole graph from the current values of
// the checked variables and return the scalar loss. Error is measured as
// ||g_ad - g_fd||_2 / max(||g_ad||_2, ||g_fd||_2, tiny).
struct GradCheckResult {
  double rel_error = 0;
  double max_abs_diff = 0;
};

inline GradCheckResult grad_check(std::vector<ad::Var<double>> checked,
                                  const std::function<ad::Var<double>()>& forward,
                                  double h = 1e-5) {
  ad::Var<double> loss = forward();
  for (auto& v : checked) {
    v.grad();
    v.zero_grad();
  }
  ad::backward(loss);

  std::vector<std::vector<double>> analytic;
  for (auto& v : checked) {
    std::vector<double> g(static_cast<size_t>(v.size()));
    for (int64_t i = 0; i < v.size(); ++i) g[static_cast<size_t>(i)] = v.grad()[i];
    analytic.push_back(std::move(g));
  }

  double num2 = 0, den_ad = 0, den_fd = 0, max_abs = 0;
  for (size_t vi = 0; vi < checked.size(); ++vi) {
    ad::Var<double>& v = checked[vi];
    for (int64_t i = 0; i < v.size(); ++i) {
      const double orig = v.value()[i];
      v.value()[i] = orig + h;
      const double lp = forward().value()[0];
      v.value()[i] = orig - h;
      const double lm = forward().value()[0];
      v.value()[i] = orig;
      const double fd = (lp - lm) / (2 * h);
      const double adg = analytic[vi][static_cast<size_t>(i)];
      const double d = adg - fd;
      num2 += d * d;
      den_ad += adg * adg;
      den_fd += fd * fd;
      max_abs = std::max(max_abs, std::abs(d));
    }
  }
  GradCheckResult r;
  const double den = std::max({std::sqrt(den_ad), std::sqrt(den_fd), 1e-12});
  r.rel_error = std::sqrt(num2) / den;
  r.max_abs_diff = max_abs;
  return r;
}

inline Array<double> random_array(Shape shape, Rng& rng, double lo = -1.0,
                                  double hi = 1.0) {
  Array<double> a(std::move(shape));
  for (int64_t i = 0; i < a.size(); ++i) a[i] = rng.uniform(lo, hi);
  return a;
}

}  // namespace seldkit::testing
