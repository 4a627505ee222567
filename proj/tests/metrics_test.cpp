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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "seldkit/metrics/metrics.hpp"

namespace seldkit {
namespace {

using metrics::Averaging;
using metrics::MatchResult;
using metrics::MetricsReport;
using seld::Event;
using seld::EventLabelSet;

Event ev(int cls, double az, double el, int src = 0) { return {cls, src, az, el}; }

// Exhaustive assignment oracle: tries every injective map of the smaller side
// into the larger and minimizes the total angle.
double brute_force_match_cost(const std::vector<Event>& refs,
                              const std::vector<Event>& preds) {
  const size_t n = refs.size(), m = preds.size();
  if (n == 0 || m == 0) return 0;
  std::vector<int> idx(std::max(n, m));
  std::iota(idx.begin(), idx.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0;
    const size_t k = std::min(n, m);
    for (size_t i = 0; i < k; ++i) {
      const Event* r;
      const Event* p;
      if (n <= m) {
        r = &refs[i];
        p = &preds[static_cast<size_t>(idx[i])];
      } else {
        r = &refs[static_cast<size_t>(idx[i])];
        p = &preds[i];
      }
      total += great_circle_deg(r->azimuth, r->elevation, p->azimuth, p->elevation);
    }
    best = std::min(best, total);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return best;
}

TEST(MatchFrame, SinglePair) {
  const MatchResult m = metrics::match_frame({ev(0, 0, 0)}, {ev(0, 10, 0)}, 0);
  ASSERT_EQ(m.pairs.size(), 1u);
  EXPECT_NEAR(m.pairs[0].angle, 10.0, 1e-9);
  EXPECT_TRUE(m.unmatched_refs.empty());
  EXPECT_TRUE(m.unmatched_preds.empty());
}

TEST(MatchFrame, AvoidsCrossing) {
  // refs {0, 90}, preds {85, 5}: optimal pairs are (0,5) and (90,85)
  const MatchResult m =
      metrics::match_frame({ev(1, 0, 0), ev(1, 90, 0)}, {ev(1, 85, 0), ev(1, 5, 0)}, 1);
  ASSERT_EQ(m.pairs.size(), 2u);
  double total = 0;
  for (const auto& p : m.pairs) total += p.angle;
  EXPECT_NEAR(total, 10.0, 1e-9);
}

TEST(MatchFrame, NoPredsAllRefsUnmatched) {
  const MatchResult m = metrics::match_frame({ev(2, 0, 0), ev(2, 40, 10)}, {}, 2);
  EXPECT_TRUE(m.pairs.empty());
  EXPECT_EQ(m.unmatched_refs.size(), 2u);
}

TEST(MatchFrame, IgnoresOtherClasses) {
  const MatchResult m =
      metrics::match_frame({ev(3, 0, 0), ev(4, 0, 0)}, {ev(4, 5, 0), ev(5, 0, 0)}, 4);
  ASSERT_EQ(m.pairs.size(), 1u);
  EXPECT_EQ(m.pairs[0].ref.class_id, 4);
}

TEST(MatchFrame, HungarianEqualsBruteForce) {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Event> refs, preds;
    const int nr = static_cast<int>(rng.uniform_int(0, 3));
    const int np = static_cast<int>(rng.uniform_int(0, 3));
    for (int i = 0; i < nr; ++i)
      refs.push_back(ev(0, rng.uniform(-180, 180), rng.uniform(-90, 90), i));
    for (int i = 0; i < np; ++i)
      preds.push_back(ev(0, rng.uniform(-180, 180), rng.uniform(-90, 90), i));

    const MatchResult m = metrics::match_frame(refs, preds, 0);
    EXPECT_EQ(m.pairs.size(), static_cast<size_t>(std::min(nr, np)));
    double total = 0;
    for (const auto& p : m.pairs) total += p.angle;
    EXPECT_NEAR(total, brute_force_match_cost(refs, preds), 1e-9) << "trial " << trial;
  }
}

TEST(GreatCircle, SymmetricAndTriangle) {
  Rng rng(31337);
  for (int i = 0; i < 1000; ++i) {
    const double a1 = rng.uniform(-180, 180), e1 = rng.uniform(-90, 90);
    const double a2 = rng.uniform(-180, 180), e2 = rng.uniform(-90, 90);
    const double a3 = rng.uniform(-180, 180), e3 = rng.uniform(-90, 90);
    const double dab = great_circle_deg(a1, e1, a2, e2);
    const double dba = great_circle_deg(a2, e2, a1, e1);
    const double dbc = great_circle_deg(a2, e2, a3, e3);
    const double dac = great_circle_deg(a1, e1, a3, e3);
    EXPECT_DOUBLE_EQ(dab, dba);
    EXPECT_GE(dab, 0.0);
    EXPECT_LE(dab, 180.0);
    EXPECT_LE(dac, dab + dbc + 1e-9);
  }
}

TEST(SeldScore, PaperRows) {
  // Baseline AO row
  EXPECT_NEAR(metrics::seld_score(0.57, 0.299, 22.0, 0.477), 0.479, 0.0005);
  // perfect system
  EXPECT_DOUBLE_EQ(metrics::seld_score(0, 1, 0, 1), 0.0);
  // I3D Conf row
  EXPECT_NEAR(metrics::seld_score(0.52, 0.464, 16.9, 0.602), 0.387, 0.0005);
  // RC Conf row from the operation example
  EXPECT_NEAR(metrics::seld_score(0.51, 0.495, 15.8, 0.602), 0.375, 0.0005);
  EXPECT_THROW(metrics::seld_score(0.5, 0.5, 200.0, 0.5), InputError);
  EXPECT_THROW(metrics::seld_score(0.5, 0.5, -1.0, 0.5), InputError);
}

TEST(Evaluate, PerfectPredictions) {
  EventLabelSet refs;
  refs.add(0, ev(1, 30, 10));
  refs.add(1, ev(2, -50, 0));
  refs.add(1, ev(1, 100, -20));
  const MetricsReport r = metrics::evaluate(refs, refs);
  EXPECT_EQ(r.er, 0.0);
  EXPECT_EQ(r.f1, 1.0);
  EXPECT_EQ(r.le, 0.0);
  EXPECT_EQ(r.lr, 1.0);
  EXPECT_EQ(r.seld, 0.0);
}

TEST(Evaluate, MatchedBeyondThresholdCountsFpPlusFn) {
  EventLabelSet refs, preds;
  refs.add(0, ev(0, 0, 0));
  preds.add(0, ev(0, 30, 0));  // matched at 30 deg > T=20
  const MetricsReport r = metrics::evaluate(refs, preds);
  EXPECT_DOUBLE_EQ(r.er, 1.0);   // one substitution over one reference
  EXPECT_DOUBLE_EQ(r.f1, 0.0);
  EXPECT_NEAR(r.le, 30.0, 1e-9);  // LE is threshold-free
  EXPECT_DOUBLE_EQ(r.lr, 1.0);    // matched regardless of threshold
}

TEST(Evaluate, FrameLevelErBookkeeping) {
  EventLabelSet refs, preds;
  // frame 0: 2 refs, 1 correct pred -> 1 deletion
  refs.add(0, ev(0, 0, 0, 0));
  refs.add(0, ev(1, 90, 0, 0));
  preds.add(0, ev(0, 2, 0, 0));
  // frame 1: 1 ref, 2 preds (one correct, one spurious class) -> 1 insertion
  refs.add(1, ev(2, -120, 5, 0));
  preds.add(1, ev(2, -118, 5, 0));
  preds.add(1, ev(5, 0, 0, 0));
  // frame 2: 1 ref of class 3, 1 pred of class 4 -> FN+FP = 1 substitution
  refs.add(2, ev(3, 10, 0, 0));
  preds.add(2, ev(4, 10, 0, 0));

  const MetricsReport r = metrics::evaluate(refs, preds);
  // ER = (D + I + S) / N = (1 + 1 + 1) / 4
  EXPECT_DOUBLE_EQ(r.er, 0.75);
}

TEST(Evaluate, MacroExcludesRefFreeClasses) {
  EventLabelSet refs, preds;
  refs.add(0, ev(1, 0, 0));
  preds.add(0, ev(1, 1, 0));
  preds.add(0, ev(7, 50, 0));  // spurious class with no references
  const MetricsReport r = metrics::evaluate(refs, preds);
  EXPECT_DOUBLE_EQ(r.f1, 1.0);  // class 7 excluded from macro F1
  EXPECT_DOUBLE_EQ(r.lr, 1.0);
  EXPECT_DOUBLE_EQ(r.er, 1.0);  // the insertion still counts: I=1 over 1 ref
}

TEST(Evaluate, MicroEqualsMacroWithSingleClass) {
  Rng rng(7);
  EventLabelSet refs, preds;
  for (int t = 0; t < 20; ++t) {
    if (rng.bernoulli(0.8)) refs.add(t, ev(4, rng.uniform(-180, 180), rng.uniform(-60, 60)));
    if (rng.bernoulli(0.8)) preds.add(t, ev(4, rng.uniform(-180, 180), rng.uniform(-60, 60)));
  }
  refs.ensure_frames(20);
  preds.ensure_frames(20);
  if (refs.total_events() == 0) refs.add(0, ev(4, 0, 0));
  const MetricsReport macro = metrics::evaluate(refs, preds, 20.0, Averaging::kMacro);
  const MetricsReport micro = metrics::evaluate(refs, preds, 20.0, Averaging::kMicro);
  EXPECT_DOUBLE_EQ(macro.f1, micro.f1);
  EXPECT_DOUBLE_EQ(macro.le, micro.le);
  EXPECT_DOUBLE_EQ(macro.lr, micro.lr);
  EXPECT_DOUBLE_EQ(macro.er, micro.er);
}

TEST(Evaluate, LeDefaultsTo180WithNoMatches) {
  EventLabelSet refs, preds;
  refs.add(0, ev(0, 0, 0));
  preds.ensure_frames(1);
  const MetricsReport r = metrics::evaluate(refs, preds);
  EXPECT_DOUBLE_EQ(r.le, 180.0);
  EXPECT_DOUBLE_EQ(r.lr, 0.0);
}

TEST(Evaluate, EmptyReferenceSetRejected) {
  EventLabelSet refs, preds;
  refs.ensure_frames(3);
  preds.add(0, ev(0, 0, 0));
  EXPECT_THROW(metrics::evaluate(refs, preds), EvalError);
}

TEST(Evaluate, SeldRecomputableFromFields) {
  Rng rng(17);
  EventLabelSet refs, preds;
  for (int t = 0; t < 30; ++t) {
    const int nr = static_cast<int>(rng.uniform_int(0, 2));
    for (int i = 0; i < nr; ++i)
      refs.add(t, ev(static_cast<int>(rng.uniform_int(0, 12)), rng.uniform(-180, 180),
                     rng.uniform(-80, 80), i));
    const int np = static_cast<int>(rng.uniform_int(0, 2));
    for (int i = 0; i < np; ++i)
      preds.add(t, ev(static_cast<int>(rng.uniform_int(0, 12)), rng.uniform(-180, 180),
                      rng.uniform(-80, 80), i));
  }
  refs.add(0, ev(0, 0, 0, 5));
  refs.ensure_frames(30);
  preds.ensure_frames(30);
  const MetricsReport r = metrics::evaluate(refs, preds);
  EXPECT_NEAR(r.seld, metrics::seld_score(r.er, r.f1, r.le, r.lr), 1e-12);
}

// Adding a prediction that lands exactly on an unmatched reference never
// lowers F1 or LR; adding a far-away spurious prediction never lowers ER.
TEST(Evaluate, MonotonicityProperties) {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    EventLabelSet refs, preds;
    for (int t = 0; t < 5; ++t) {
      const int nr = 1 + static_cast<int>(rng.uniform_int(0, 1));
      for (int i = 0; i < nr; ++i)
        refs.add(t, ev(static_cast<int>(rng.uniform_int(0, 3)),
                       rng.uniform(-170, 170), rng.uniform(-70, 70), i));
      if (rng.bernoulli(0.6))
        preds.add(t, ev(static_cast<int>(rng.uniform_int(0, 3)),
                        rng.uniform(-170, 170), rng.uniform(-70, 70)));
    }
    refs.ensure_frames(5);
    preds.ensure_frames(5);
    const MetricsReport base = metrics::evaluate(refs, preds);

    // correct addition: a pred exactly on some reference of a frame where that
    // class is not yet fully matched
    int64_t t_pick = -1;
    Event ref_pick;
    for (int64_t t = 0; t < 5 && t_pick < 0; ++t)
      for (const Event& e : refs.frames[static_cast<size_t>(t)]) {
        const MatchResult m =
            metrics::match_frame(refs.frames[static_cast<size_t>(t)],
                                 preds.frames[static_cast<size_t>(t)], e.class_id);
        if (!m.unmatched_refs.empty()) {
          t_pick = t;
          ref_pick = m.unmatched_refs[0];
          break;
        }
      }
    if (t_pick >= 0) {
      EventLabelSet preds2 = preds;
      Event added = ref_pick;
      added.source_id = 90;
      preds2.add(t_pick, added);
      const MetricsReport better = metrics::evaluate(refs, preds2);
      EXPECT_GE(better.f1, base.f1 - 1e-12);
      EXPECT_GE(better.lr, base.lr - 1e-12);
    }

    // spurious addition, >60 deg from every reference in its frame
    EventLabelSet preds3 = preds;
    for (int attempt = 0; attempt < 200; ++attempt) {
      const Event cand = ev(static_cast<int>(rng.uniform_int(0, 3)),
                            rng.uniform(-180, 180), rng.uniform(-90, 90), 91);
      bool far = true;
      for (const Event& e : refs.frames[0])
        if (great_circle_deg(e.azimuth, e.elevation, cand.azimuth, cand.elevation) < 60)
          far = false;
      if (far) {
        preds3.add(0, cand);
        break;
      }
    }
    const MetricsReport worse = metrics::evaluate(refs, preds3);
    EXPECT_GE(worse.er, base.er - 1e-12);
  }
}

// Table 1 closure: recomputing SELD from each row's four printed metrics must
// land within rounding distance of the printed SELD.
TEST(Evaluate, Table1Closure) {
  struct Row {
    const char* name;
    double er, f1, le, lr, seld;
  };
  const Row rows[] = {
      {"I3D CMAF", 0.57, 0.405, 33.2, 0.553, 0.45},
      {"I3D Conf", 0.52, 0.464, 16.9, 0.602, 0.39},
      {"RC CMAF", 0.54, 0.413, 31.6, 0.534, 0.44},
      {"RC Conf", 0.51, 0.495, 15.8, 0.602, 0.38},
      {"RC CA", 0.55, 0.347, 30.4, 0.478, 0.47},
      {"RC GRU", 0.50, 0.494, 16.2, 0.568, 0.38},
      {"Both Conf", 0.52, 0.480, 16.2, 0.608, 0.38},
      {"Visual-only", 1.03, 0.009, 103.0, 0.114, 0.87},
      {"Audio-only", 0.51, 0.502, 15.4, 0.564, 0.38},
      {"Baseline AO", 0.57, 0.299, 22.0, 0.477, 0.48},
      {"Baseline AV", 1.07, 0.143, 48.0, 0.355, 0.71},
  };
  for (const Row& r : rows)
    EXPECT_NEAR(metrics::seld_score(r.er, r.f1, r.le, r.lr), r.seld, 0.005) << r.name;
}

}  // namespace
}  // namespace seldkit
