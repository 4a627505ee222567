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

#include <limits>
#include <map>
#include <vector>

#include "seldkit/labels/event_labels.hpp"
#include "seldkit/ndarray.hpp"

namespace seldkit::metrics {

using seld::Event;
using seld::EventLabelSet;

// Minimum-cost assignment on a square matrix (O(n^3), potentials method).
// Returns col_of_row: for each row, the assigned column.
inline std::vector<int> hungarian(const Array<double>& cost) {
  if (cost.ndim() != 2 || cost.dim(0) != cost.dim(1))
    throw ShapeError("hungarian: square matrix required");
  const int n = static_cast<int>(cost.dim(0));
  if (n == 0) return {};

  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<size_t>(n) + 1), v(static_cast<size_t>(n) + 1);
  std::vector<int> p(static_cast<size_t>(n) + 1), way(static_cast<size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<size_t>(n) + 1, kInf);
    std::vector<bool> used(static_cast<size_t>(n) + 1, false);
    do {
      used[static_cast<size_t>(j0)] = true;
      const int i0 = p[static_cast<size_t>(j0)];
      double delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<size_t>(j)]) continue;
        const double cur = cost.at(i0 - 1, j - 1) - u[static_cast<size_t>(i0)] -
                           v[static_cast<size_t>(j)];
        if (cur < minv[static_cast<size_t>(j)]) {
          minv[static_cast<size_t>(j)] = cur;
          way[static_cast<size_t>(j)] = j0;
        }
        if (minv[static_cast<size_t>(j)] < delta) {
          delta = minv[static_cast<size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<size_t>(j)]) {
          u[static_cast<size_t>(p[static_cast<size_t>(j)])] += delta;
          v[static_cast<size_t>(j)] -= delta;
        } else {
          minv[static_cast<size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<size_t>(j0)];
      p[static_cast<size_t>(j0)] = p[static_cast<size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> col_of_row(static_cast<size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    if (p[static_cast<size_t>(j)] != 0)
      col_of_row[static_cast<size_t>(p[static_cast<size_t>(j)]) - 1] = j - 1;
  return col_of_row;
}

struct MatchedPair {
  Event ref;
  Event pred;
  double angle = 0;  // great-circle degrees
};

struct MatchResult {
  std::vector<MatchedPair> pairs;
  std::vector<Event> unmatched_refs;
  std::vector<Event> unmatched_preds;
};

// Minimum-total-angular-cost assignment between same-class refs and preds of
// one frame. Dummy pads carry a large constant, so the real pairing is
// maximum-cardinality first, minimum angle second.
inline MatchResult match_frame(const std::vector<Event>& frame_refs,
                               const std::vector<Event>& frame_preds, int class_id) {
  std::vector<Event> refs, preds;
  for (const Event& e : frame_refs)
    if (e.class_id == class_id) refs.push_back(e);
  for (const Event& e : frame_preds)
    if (e.class_id == class_id) preds.push_back(e);

  MatchResult out;
  if (refs.empty() || preds.empty()) {
    out.unmatched_refs = refs;
    out.unmatched_preds = preds;
    return out;
  }

  constexpr double kDummy = 1e6;
  const int n = static_cast<int>(std::max(refs.size(), preds.size()));
  Array<double> cost(Shape{n, n}, kDummy);
  for (size_t r = 0; r < refs.size(); ++r)
    for (size_t p = 0; p < preds.size(); ++p)
      cost.at(static_cast<int64_t>(r), static_cast<int64_t>(p)) =
          great_circle_deg(refs[r].azimuth, refs[r].elevation, preds[p].azimuth,
                           preds[p].elevation);

  const std::vector<int> assign = hungarian(cost);
  std::vector<bool> pred_used(preds.size(), false);
  for (size_t r = 0; r < refs.size(); ++r) {
    const int c = assign[r];
    if (c >= 0 && c < static_cast<int>(preds.size())) {
      out.pairs.push_back({refs[r], preds[static_cast<size_t>(c)],
                           cost.at(static_cast<int64_t>(r), c)});
      pred_used[static_cast<size_t>(c)] = true;
    } else {
      out.unmatched_refs.push_back(refs[r]);
    }
  }
  for (size_t p = 0; p < preds.size(); ++p)
    if (!pred_used[p]) out.unmatched_preds.push_back(preds[p]);
  return out;
}

enum class Averaging { kMacro, kMicro };

struct ClassMetrics {
  int64_t tp = 0, fp = 0, fn = 0;
  int64_t matched = 0;  // pairs regardless of the spatial threshold
  int64_t refs = 0;
  double angle_sum = 0;

  double f1() const {
    const double denom = static_cast<double>(2 * tp + fp + fn);
    return denom > 0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
  }
  double le() const {
    return matched > 0 ? angle_sum / static_cast<double>(matched) : 180.0;
  }
  double lr() const {
    return refs > 0 ? static_cast<double>(matched) / static_cast<double>(refs) : 0.0;
  }
};

struct MetricsReport {
  double er = 0;
  double f1 = 0;
  double le = 180.0;  // degrees; 180 when no matches exist
  double lr = 0;
  double seld = 0;
  Averaging averaging = Averaging::kMacro;
  std::map<int, ClassMetrics> per_class;
};

// SELD = mean(ER, 1 - F1, LE/180, 1 - LR), LE in degrees.
inline double seld_score(double er, double f1, double le_deg, double lr) {
  if (le_deg < 0.0 || le_deg > 180.0)
    throw InputError("seld_score: LE must be in [0, 180] degrees");
  return (er + (1.0 - f1) + le_deg / 180.0 + (1.0 - lr)) / 4.0;
}

// Frame-level location-dependent evaluation at 100 ms resolution.
// Per frame and class: matched pairs within the threshold are TPs, matched
// pairs beyond it count one FP and one FN, leftovers count FP/FN. ER uses
// frame-level substitutions/deletions/insertions; F1/LE/LR aggregate per
// class (macro over classes with references) or pooled (micro).
inline MetricsReport evaluate(const EventLabelSet& refs, const EventLabelSet& preds,
                              double threshold_deg = 20.0,
                              Averaging averaging = Averaging::kMacro) {
  if (refs.total_events() == 0)
    throw EvalError("evaluate: empty reference set (ER denominator undefined)");

  const int64_t frames = std::max(refs.num_frames(), preds.num_frames());
  static const std::vector<Event> kEmpty;

  std::map<int, ClassMetrics> per_class;
  int64_t er_numer = 0, er_denom = 0;

  for (int64_t t = 0; t < frames; ++t) {
    const auto& rf = t < refs.num_frames() ? refs.frames[static_cast<size_t>(t)] : kEmpty;
    const auto& pf = t < preds.num_frames() ? preds.frames[static_cast<size_t>(t)] : kEmpty;

    std::set<int> classes;
    for (const Event& e : rf) classes.insert(e.class_id);
    for (const Event& e : pf) classes.insert(e.class_id);

    int64_t frame_fn = 0, frame_fp = 0;
    for (int c : classes) {
      const MatchResult m = match_frame(rf, pf, c);
      ClassMetrics& cm = per_class[c];
      for (const MatchedPair& pair : m.pairs) {
        ++cm.matched;
        cm.angle_sum += pair.angle;
        if (pair.angle <= threshold_deg) {
          ++cm.tp;
        } else {
          ++cm.fp;
          ++cm.fn;
          ++frame_fp;
          ++frame_fn;
        }
      }
      cm.fn += static_cast<int64_t>(m.unmatched_refs.size());
      cm.fp += static_cast<int64_t>(m.unmatched_preds.size());
      frame_fn += static_cast<int64_t>(m.unmatched_refs.size());
      frame_fp += static_cast<int64_t>(m.unmatched_preds.size());
    }
    for (const Event& e : rf) ++per_class[e.class_id].refs;

    const int64_t subs = std::min(frame_fn, frame_fp);
    const int64_t dels = std::max<int64_t>(0, frame_fn - frame_fp);
    const int64_t ins = std::max<int64_t>(0, frame_fp - frame_fn);
    er_numer += subs + dels + ins;
    er_denom += static_cast<int64_t>(rf.size());
  }

  MetricsReport report;
  report.averaging = averaging;
  report.per_class = per_class;
  report.er = static_cast<double>(er_numer) / static_cast<double>(er_denom);

  if (averaging == Averaging::kMacro) {
    double f1 = 0, le = 0, lr = 0;
    int64_t active = 0;
    for (const auto& [c, cm] : per_class) {
      if (cm.refs == 0) continue;  // classes with no references are excluded
      ++active;
      f1 += cm.f1();
      le += cm.le();
      lr += cm.lr();
    }
    report.f1 = f1 / static_cast<double>(active);
    report.le = le / static_cast<double>(active);
    report.lr = lr / static_cast<double>(active);
  } else {
    ClassMetrics pooled;
    for (const auto& [c, cm] : per_class) {
      pooled.tp += cm.tp;
      pooled.fp += cm.fp;
      pooled.fn += cm.fn;
      pooled.matched += cm.matched;
      pooled.refs += cm.refs;
      pooled.angle_sum += cm.angle_sum;
    }
    report.f1 = pooled.f1();
    report.le = pooled.le();
    report.lr = pooled.lr();
  }
  report.seld = seld_score(report.er, report.f1, report.le, report.lr);
  return report;
}

}  // namespace seldkit::metrics
