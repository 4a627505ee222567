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

#include <algorithm>
#include <array>
#include <vector>

#include "seldkit/common.hpp"
#include "seldkit/labels/event_labels.hpp"
#include "seldkit/ndarray.hpp"

namespace seldkit::seld {

inline constexpr int kNumTracks = 3;

// AccdoaTensor: [T_lab x N x C x 3], each 3-vector couples activity (norm)
// with direction (unit vector when active).
template <typename T>
using AccdoaTensor = Array<T>;

struct DecodeConfig {
  double activity_threshold = 0.5;  // vector norm above which a track is active
  double merge_angle = 15.0;        // great-circle degrees

  void validate() const {
    if (!(activity_threshold > 0.0 && activity_threshold < 1.0))
      throw ConfigError("DecodeConfig: activity_threshold must be in (0,1)");
    if (merge_angle < 0.0) throw ConfigError("DecodeConfig: merge_angle must be >= 0");
  }
};

namespace detail {

// Events of one (frame, class), ordered by ascending source_id.
inline std::vector<const Event*> active_events(const std::vector<Event>& frame,
                                               int class_id) {
  std::vector<const Event*> out;
  for (const Event& e : frame)
    if (e.class_id == class_id) out.push_back(&e);
  std::sort(out.begin(), out.end(),
            [](const Event* a, const Event* b) { return a->source_id < b->source_id; });
  return out;
}

}  // namespace detail

// Encodes a label set into a multi-track ACCDOA tensor. Active events become
// unit Cartesian vectors on tracks assigned by ascending source_id; empty
// cells stay zero.
template <typename T = float>
AccdoaTensor<T> encode_targets(const EventLabelSet& labels, int64_t num_frames,
                               int tracks = kNumTracks, int classes = kNumClasses) {
  AccdoaTensor<T> out(Shape{num_frames, tracks, classes, 3});
  for (int64_t t = 0; t < num_frames && t < labels.num_frames(); ++t) {
    for (int c = 0; c < classes; ++c) {
      const auto evs = detail::active_events(labels.frames[static_cast<size_t>(t)], c);
      if (static_cast<int>(evs.size()) > tracks)
        throw CapacityError("encode_targets: " + std::to_string(evs.size()) +
                                " simultaneous events of class " + std::to_string(c) +
                                " at frame " + std::to_string(t) + " exceed " +
                                std::to_string(tracks) + " tracks",
                            static_cast<int>(t), c);
      for (size_t n = 0; n < evs.size(); ++n) {
        const Vec3 u = doa_to_unit(evs[n]->azimuth, evs[n]->elevation);
        out.at(t, static_cast<int64_t>(n), c, 0) = static_cast<T>(u.x);
        out.at(t, static_cast<int64_t>(n), c, 1) = static_cast<T>(u.y);
        out.at(t, static_cast<int64_t>(n), c, 2) = static_cast<T>(u.z);
      }
    }
  }
  return out;
}

template <typename T = float>
AccdoaTensor<T> encode_targets(const EventLabelSet& labels, int tracks = kNumTracks,
                               int classes = kNumClasses) {
  return encode_targets<T>(labels, labels.num_frames(), tracks, classes);
}

// Inference rule: a (track, class) cell with vector norm above the activity
// threshold emits an event at its direction; same-class detections within
// merge_angle of a stronger one are dropped. source_id is the track index.
template <typename T>
EventLabelSet decode_predictions(const AccdoaTensor<T>& out, const DecodeConfig& cfg = {}) {
  cfg.validate();
  if (out.ndim() != 4 || out.dim(3) != 3)
    throw ShapeError("decode_predictions: expected [T x N x C x 3], got " +
                     shape_str(out.shape()));
  const int64_t T_lab = out.dim(0), N = out.dim(1), C = out.dim(2);

  EventLabelSet labels;
  labels.ensure_frames(T_lab);
  struct Cand {
    int track;
    double norm;
    Vec3 dir;
  };
  for (int64_t t = 0; t < T_lab; ++t) {
    for (int64_t c = 0; c < C; ++c) {
      std::vector<Cand> cands;
      for (int64_t n = 0; n < N; ++n) {
        const Vec3 v{static_cast<double>(out.at(t, n, c, 0)),
                     static_cast<double>(out.at(t, n, c, 1)),
                     static_cast<double>(out.at(t, n, c, 2))};
        const double norm = v.norm();
        if (norm > cfg.activity_threshold)
          cands.push_back({static_cast<int>(n), norm, v.normalized()});
      }
      std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        return a.norm > b.norm || (a.norm == b.norm && a.track < b.track);
      });
      std::vector<const Cand*> kept;
      for (const Cand& cand : cands) {
        bool merged = false;
        for (const Cand* k : kept)
          if (great_circle_deg(cand.dir, k->dir) <= cfg.merge_angle) {
            merged = true;
            break;
          }
        if (!merged) kept.push_back(&cand);
      }
      for (const Cand* k : kept) {
        const AzEl doa = unit_to_doa(k->dir);
        labels.frames[static_cast<size_t>(t)].push_back(
            {static_cast<int>(c), k->track, doa.azimuth, doa.elevation});
      }
    }
  }
  return labels;
}

// ---- class-wise ADPIT ------------------------------------------------------
//
// Candidate targets for a (frame, class) with k active events are all
// surjective assignments of the N tracks onto the k events (k = 0 keeps the
// single all-zero target). Candidate cost is the MSE over the N*3 entries;
// the class loss is the minimum over candidates.

namespace adpit {

// Enumerates assignments f: tracks -> events as base-k digit vectors,
// keeping only surjective ones. k = 0 yields one empty assignment
// (interpreted as the all-zero target).
inline std::vector<std::vector<int>> surjective_assignments(int tracks, int k) {
  std::vector<std::vector<int>> out;
  if (k == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<int> f(static_cast<size_t>(tracks), 0);
  while (true) {
    std::vector<bool> hit(static_cast<size_t>(k), false);
    for (int n = 0; n < tracks; ++n) hit[static_cast<size_t>(f[static_cast<size_t>(n)])] = true;
    if (std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) out.push_back(f);
    int i = 0;
    for (; i < tracks; ++i) {
      if (++f[static_cast<size_t>(i)] < k) break;
      f[static_cast<size_t>(i)] = 0;
    }
    if (i == tracks) break;
  }
  return out;
}

// Track-permutation-invariant sum: per-track squared-error subtotals are
// sorted before adding so permuting prediction tracks reproduces the exact
// same floating-point value.
template <typename T>
double candidate_cost(const T* pred, const std::vector<Vec3>& events,
                      const std::vector<int>& assign, int tracks) {
  std::vector<double> per_track(static_cast<size_t>(tracks));
  for (int n = 0; n < tracks; ++n) {
    double tx = 0, ty = 0, tz = 0;
    if (!assign.empty()) {
      const Vec3& e = events[static_cast<size_t>(assign[static_cast<size_t>(n)])];
      tx = e.x;
      ty = e.y;
      tz = e.z;
    }
    const double dx = static_cast<double>(pred[n * 3 + 0]) - tx;
    const double dy = static_cast<double>(pred[n * 3 + 1]) - ty;
    const double dz = static_cast<double>(pred[n * 3 + 2]) - tz;
    per_track[static_cast<size_t>(n)] = dx * dx + dy * dy + dz * dz;
  }
  std::sort(per_track.begin(), per_track.end());
  double total = 0;
  for (double s : per_track) total += s;
  return total / (tracks * 3.0);
}

// Minimum candidate cost for one (frame, class); writes the winning target
// into best_target (tracks*3 values) when non-null.
template <typename T>
double frame_class_loss(const T* pred, const std::vector<Vec3>& events, int tracks,
                        double* best_target = nullptr) {
  const int k = static_cast<int>(events.size());
  const auto assigns = surjective_assignments(tracks, k);
  double best = std::numeric_limits<double>::infinity();
  const std::vector<int>* best_assign = nullptr;
  for (const auto& f : assigns) {
    const double cost = candidate_cost(pred, events, f, tracks);
    if (cost < best) {
      best = cost;
      best_assign = &f;
    }
  }
  if (best_target) {
    for (int n = 0; n < tracks; ++n) {
      Vec3 e{0, 0, 0};
      if (!best_assign->empty())
        e = events[static_cast<size_t>((*best_assign)[static_cast<size_t>(n)])];
      best_target[n * 3 + 0] = e.x;
      best_target[n * 3 + 1] = e.y;
      best_target[n * 3 + 2] = e.z;
    }
  }
  return best;
}

// Per-(frame, class) unit event vectors, source-id order, capacity-checked.
inline std::vector<std::vector<std::vector<Vec3>>> event_vectors(
    const EventLabelSet& labels, int64_t num_frames, int tracks, int classes) {
  std::vector<std::vector<std::vector<Vec3>>> out(static_cast<size_t>(num_frames));
  for (int64_t t = 0; t < num_frames; ++t) {
    out[static_cast<size_t>(t)].resize(static_cast<size_t>(classes));
    if (t >= labels.num_frames()) continue;
    for (int c = 0; c < classes; ++c) {
      const auto evs = detail::active_events(labels.frames[static_cast<size_t>(t)], c);
      if (static_cast<int>(evs.size()) > tracks)
        throw CapacityError("adpit: " + std::to_string(evs.size()) +
                                " simultaneous events of class " + std::to_string(c) +
                                " at frame " + std::to_string(t) + " exceed " +
                                std::to_string(tracks) + " tracks",
                            static_cast<int>(t), c);
      for (const Event* e : evs)
        out[static_cast<size_t>(t)][static_cast<size_t>(c)].push_back(
            doa_to_unit(e->azimuth, e->elevation));
    }
  }
  return out;
}

}  // namespace adpit

// Plain (non-differentiable) ADPIT loss value: mean over frames and classes
// of the per-class minimum candidate MSE.
template <typename T>
double adpit_loss_value(const AccdoaTensor<T>& pred, const EventLabelSet& labels) {
  if (pred.ndim() != 4 || pred.dim(3) != 3)
    throw ShapeError("adpit_loss: expected [T x N x C x 3], got " +
                     shape_str(pred.shape()));
  const int64_t T_lab = pred.dim(0);
  const int tracks = static_cast<int>(pred.dim(1));
  const int classes = static_cast<int>(pred.dim(2));
  const auto events = adpit::event_vectors(labels, T_lab, tracks, classes);

  double total = 0;
  for (int64_t t = 0; t < T_lab; ++t)
    for (int c = 0; c < classes; ++c) {
      std::vector<T> buf(static_cast<size_t>(tracks) * 3);
      for (int n = 0; n < tracks; ++n)
        for (int d = 0; d < 3; ++d)
          buf[static_cast<size_t>(n * 3 + d)] = pred.at(t, n, c, d);
      total += adpit::frame_class_loss(buf.data(),
                                       events[static_cast<size_t>(t)][static_cast<size_t>(c)],
                                       tracks);
    }
  return total / (static_cast<double>(T_lab) * classes);
}

}  // namespace seldkit::seld
