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

#include "seldkit/ad/graph.hpp"
#include "seldkit/labels/accdoa.hpp"

namespace seldkit::seld {

// Differentiable class-wise ADPIT loss. pred is a graph variable of shape
// [T x N x C x 3]; the loss is the mean over frames and classes of the
// minimum candidate MSE, and the gradient flows through the argmin branch
// only: d/dpred = 2 (pred - best_target) / (T * C * N * 3).
template <typename T>
ad::Var<T> adpit_loss(const ad::Var<T>& pred, const EventLabelSet& labels) {
  if (pred.ndim() != 4 || pred.dim(3) != 3)
    throw ShapeError("adpit_loss: expected [T x N x C x 3], got " +
                     shape_str(pred.shape()));
  const int64_t T_lab = pred.dim(0);
  const int tracks = static_cast<int>(pred.dim(1));
  const int classes = static_cast<int>(pred.dim(2));
  const auto events = adpit::event_vectors(labels, T_lab, tracks, classes);

  auto best = std::make_shared<Array<double>>(pred.shape());
  std::vector<T> buf(static_cast<size_t>(tracks) * 3);
  std::vector<double> tgt(static_cast<size_t>(tracks) * 3);
  double total = 0;
  for (int64_t t = 0; t < T_lab; ++t)
    for (int c = 0; c < classes; ++c) {
      for (int n = 0; n < tracks; ++n)
        for (int d = 0; d < 3; ++d)
          buf[static_cast<size_t>(n * 3 + d)] = pred.value().at(t, n, c, d);
      total += adpit::frame_class_loss(
          buf.data(), events[static_cast<size_t>(t)][static_cast<size_t>(c)], tracks,
          tgt.data());
      for (int n = 0; n < tracks; ++n)
        for (int d = 0; d < 3; ++d)
          best->at(t, n, c, d) = tgt[static_cast<size_t>(n * 3 + d)];
    }

  Array<T> v(Shape{1});
  v[0] = static_cast<T>(total / (static_cast<double>(T_lab) * classes));
  const double scale = 2.0 / (static_cast<double>(T_lab) * classes * tracks * 3);
  return ad::Var<T>::make(std::move(v), {pred}, [pred, best, scale](ad::Node<T>& n) mutable {
    if (!pred.requires_grad()) return;
    const T g = n.grad[0];
    const T* pv = pred.value().data();
    T* gx = pred.grad().data();
    const double* tv = best->data();
    for (int64_t i = 0; i < pred.size(); ++i)
      gx[i] += g * static_cast<T>(scale * (static_cast<double>(pv[i]) - tv[i]));
  });
}

}  // namespace seldkit::seld
