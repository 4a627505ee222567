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

#include "seldkit/labels/accdoa.hpp"
#include "seldkit/labels/adpit_loss.hpp"
#include "test_util.hpp"

namespace seldkit {
namespace {

using seld::DecodeConfig;
using seld::Event;
using seld::EventLabelSet;

// Independent brute-force ADPIT oracle: enumerates every function
// tracks -> events by digit counting, filters non-surjective ones itself,
// and scores with plain front-to-back MSE.
double brute_force_adpit(const std::vector<double>& pred /* N*3 */,
                         const std::vector<Vec3>& events, int tracks) {
  const int k = static_cast<int>(events.size());
  if (k == 0) {
    double s = 0;
    for (double p : pred) s += p * p;
    return s / static_cast<double>(tracks * 3);
  }
  double best = std::numeric_limits<double>::infinity();
  const int total = static_cast<int>(std::pow(k, tracks));
  for (int code = 0; code < total; ++code) {
    int c = code;
    std::vector<int> assign(static_cast<size_t>(tracks));
    std::vector<bool> hit(static_cast<size_t>(k), false);
    for (int n = 0; n < tracks; ++n) {
      assign[static_cast<size_t>(n)] = c % k;
      hit[static_cast<size_t>(c % k)] = true;
      c /= k;
    }
    if (!std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) continue;
    double cost = 0;
    for (int n = 0; n < tracks; ++n) {
      const Vec3& e = events[static_cast<size_t>(assign[static_cast<size_t>(n)])];
      const double dx = pred[static_cast<size_t>(n * 3 + 0)] - e.x;
      const double dy = pred[static_cast<size_t>(n * 3 + 1)] - e.y;
      const double dz = pred[static_cast<size_t>(n * 3 + 2)] - e.z;
      cost += dx * dx + dy * dy + dz * dz;
    }
    best = std::min(best, cost / static_cast<double>(tracks * 3));
  }
  return best;
}

TEST(Encode, EmptyFrameIsZero) {
  EventLabelSet labels;
  labels.ensure_frames(2);
  const auto acc = seld::encode_targets<double>(labels);
  EXPECT_EQ(acc.shape(), (Shape{2, 3, 13, 3}));
  for (int64_t i = 0; i < acc.size(); ++i) EXPECT_EQ(acc[i], 0.0);
}

TEST(Encode, SingleEventUnitVector) {
  EventLabelSet labels;
  labels.add(0, {2, 0, 90.0, 0.0});
  const auto acc = seld::encode_targets<double>(labels);
  EXPECT_NEAR(acc.at(0, 0, 2, 0), 0.0, 1e-12);
  EXPECT_NEAR(acc.at(0, 0, 2, 1), 1.0, 1e-12);
  EXPECT_NEAR(acc.at(0, 0, 2, 2), 0.0, 1e-12);
  // other tracks stay zero
  for (int n = 1; n < 3; ++n)
    for (int d = 0; d < 3; ++d) EXPECT_EQ(acc.at(0, n, 2, d), 0.0);
}

TEST(Encode, TwoSameClassEventsBySourceOrder) {
  EventLabelSet labels;
  labels.add(0, {5, 1, 180.0 - 1e-12, 0.0});
  labels.add(0, {5, 0, 0.0, 0.0});
  // wrap: use -180 for the back direction
  labels.frames[0][0].azimuth = -180.0;
  const auto acc = seld::encode_targets<double>(labels);
  // source 0 -> track 0 points front; source 1 -> track 1 points back
  EXPECT_NEAR(acc.at(0, 0, 5, 0), 1.0, 1e-12);
  EXPECT_NEAR(acc.at(0, 1, 5, 0), -1.0, 1e-12);
  EXPECT_NEAR(acc.at(0, 1, 5, 1), 0.0, 1e-9);
}

TEST(Encode, CapacityErrorNamesFrameAndClass) {
  EventLabelSet labels;
  for (int s = 0; s < 4; ++s) labels.add(7, {3, s, -90.0 + 30.0 * s, 0.0});
  try {
    seld::encode_targets<double>(labels);
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    EXPECT_EQ(e.frame, 7);
    EXPECT_EQ(e.class_id, 3);
    EXPECT_NE(std::string(e.what()).find("frame 7"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("class 3"), std::string::npos);
  }
}

TEST(Decode, ThresholdAndDirection) {
  Array<double> out(Shape{1, 3, 13, 3});
  out.at(0, 0, 4, 1) = 0.6;  // norm 0.6 > 0.5 at az 90, el 0
  out.at(0, 1, 4, 0) = 0.4;  // norm 0.4 below threshold
  const EventLabelSet dec = seld::decode_predictions(out, DecodeConfig{});
  ASSERT_EQ(dec.frames[0].size(), 1u);
  EXPECT_EQ(dec.frames[0][0].class_id, 4);
  EXPECT_EQ(dec.frames[0][0].source_id, 0);
  EXPECT_NEAR(dec.frames[0][0].azimuth, 90.0, 1e-9);
  EXPECT_NEAR(dec.frames[0][0].elevation, 0.0, 1e-9);
}

TEST(Decode, MergeKeepsStrongerDetection) {
  Array<double> out(Shape{1, 3, 13, 3});
  const Vec3 a = doa_to_unit(10.0, 0.0);
  const Vec3 b = doa_to_unit(12.0, 0.0);
  out.at(0, 0, 6, 0) = 0.9 * a.x;
  out.at(0, 0, 6, 1) = 0.9 * a.y;
  out.at(0, 0, 6, 2) = 0.9 * a.z;
  out.at(0, 1, 6, 0) = 0.6 * b.x;
  out.at(0, 1, 6, 1) = 0.6 * b.y;
  out.at(0, 1, 6, 2) = 0.6 * b.z;
  const EventLabelSet dec = seld::decode_predictions(out, DecodeConfig{});
  ASSERT_EQ(dec.frames[0].size(), 1u);
  EXPECT_NEAR(dec.frames[0][0].azimuth, 10.0, 1e-9);
}

TEST(Decode, SeparateDirectionsSurvive) {
  Array<double> out(Shape{1, 3, 13, 3});
  const Vec3 a = doa_to_unit(10.0, 0.0);
  const Vec3 b = doa_to_unit(60.0, 0.0);
  for (int d = 0; d < 3; ++d) {
    out.at(0, 0, 6, d) = 0.9 * (d == 0 ? a.x : d == 1 ? a.y : a.z);
    out.at(0, 1, 6, d) = 0.6 * (d == 0 ? b.x : d == 1 ? b.y : b.z);
  }
  const EventLabelSet dec = seld::decode_predictions(out, DecodeConfig{});
  EXPECT_EQ(dec.frames[0].size(), 2u);
}

// Round trip: encode then decode reproduces any label set whose events have
// unit norm, <= N same-class events, and same-class separation above the
// merge angle.
TEST(RoundTrip, DecodeOfEncodeIsIdentity) {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    EventLabelSet labels;
    const int64_t frames = 1 + rng.uniform_int(0, 4);
    for (int64_t t = 0; t < frames; ++t) {
      const int n_events = static_cast<int>(rng.uniform_int(0, 3));
      std::vector<Event> evs;
      for (int i = 0; i < n_events; ++i) {
        for (int attempt = 0; attempt < 100; ++attempt) {
          Event e;
          e.class_id = static_cast<int>(rng.uniform_int(0, 12));
          e.azimuth = rng.uniform(-180.0, 180.0);
          e.elevation = rng.uniform(-80.0, 80.0);
          bool ok = true;
          int same_class = 0;
          for (const Event& o : evs)
            if (o.class_id == e.class_id) {
              ++same_class;
              if (great_circle_deg(o.azimuth, o.elevation, e.azimuth, e.elevation) <= 16.0)
                ok = false;
            }
          if (ok && same_class < 3) {
            e.source_id = same_class;
            evs.push_back(e);
            break;
          }
        }
      }
      for (const Event& e : evs) labels.add(t, e);
    }
    labels.ensure_frames(frames);

    const auto acc = seld::encode_targets<double>(labels);
    const EventLabelSet dec = seld::decode_predictions(acc, DecodeConfig{});
    ASSERT_EQ(dec.num_frames(), labels.num_frames());
    for (int64_t t = 0; t < frames; ++t) {
      const auto& ref = labels.frames[static_cast<size_t>(t)];
      const auto& got = dec.frames[static_cast<size_t>(t)];
      ASSERT_EQ(got.size(), ref.size()) << "frame " << t;
      for (const Event& e : ref) {
        bool found = false;
        for (const Event& g : got)
          if (g.class_id == e.class_id &&
              great_circle_deg(g.azimuth, g.elevation, e.azimuth, e.elevation) < 1e-6) {
            found = true;
            break;
          }
        EXPECT_TRUE(found) << "frame " << t << " class " << e.class_id;
      }
    }
  }
}

TEST(Adpit, ZeroTargetZeroPred) {
  EventLabelSet labels;
  labels.ensure_frames(1);
  const Array<double> pred(Shape{1, 3, 13, 3});
  EXPECT_EQ(seld::adpit_loss_value(pred, labels), 0.0);
}

TEST(Adpit, SingleEventDuplicatesAcrossTracks) {
  EventLabelSet labels;
  labels.add(0, {0, 0, 45.0, 30.0});
  Rng rng(5);
  Array<double> pred(Shape{1, 3, 1, 3});
  for (int64_t i = 0; i < pred.size(); ++i) pred[i] = rng.uniform(-1, 1);

  // single candidate: the event duplicated on all three tracks
  const Vec3 u = doa_to_unit(45.0, 30.0);
  double mse = 0;
  for (int n = 0; n < 3; ++n) {
    mse += std::pow(pred.at(0, n, 0, 0) - u.x, 2);
    mse += std::pow(pred.at(0, n, 0, 1) - u.y, 2);
    mse += std::pow(pred.at(0, n, 0, 2) - u.z, 2);
  }
  mse /= 9.0;
  EXPECT_NEAR(seld::adpit_loss_value(pred, labels), mse, 1e-12);
}

TEST(Adpit, SurjectionCounts) {
  EXPECT_EQ(seld::adpit::surjective_assignments(3, 0).size(), 1u);
  EXPECT_EQ(seld::adpit::surjective_assignments(3, 1).size(), 1u);
  EXPECT_EQ(seld::adpit::surjective_assignments(3, 2).size(), 6u);  // 2^3 - 2
  EXPECT_EQ(seld::adpit::surjective_assignments(3, 3).size(), 6u);  // 3!
}

TEST(Adpit, MatchesBruteForceOracle) {
  Rng rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = static_cast<int>(rng.uniform_int(0, 3));
    EventLabelSet labels;
    std::vector<Vec3> events;
    for (int i = 0; i < k; ++i) {
      const double az = rng.uniform(-180, 180), el = rng.uniform(-90, 90);
      labels.add(0, {0, i, az, el});
      events.push_back(doa_to_unit(az, el));
    }
    labels.ensure_frames(1);

    Array<double> pred(Shape{1, 3, 1, 3});
    std::vector<double> flat(9);
    for (int64_t i = 0; i < 9; ++i) {
      pred[i] = rng.uniform(-1.2, 1.2);
      flat[static_cast<size_t>(i)] = pred[i];
    }
    const double expected = brute_force_adpit(flat, events, 3);
    EXPECT_NEAR(seld::adpit_loss_value(pred, labels), expected, 1e-9)
        << "trial " << trial << " k=" << k;
  }
}

TEST(Adpit, TrackPermutationInvarianceExact) {
  Rng rng(321);
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int trial = 0; trial < 20; ++trial) {
    EventLabelSet labels;
    const int k = 1 + static_cast<int>(rng.uniform_int(0, 2));
    for (int i = 0; i < k; ++i)
      labels.add(0, {0, i, rng.uniform(-180, 180), rng.uniform(-90, 90)});
    labels.ensure_frames(1);
    Array<double> pred(Shape{1, 3, 1, 3});
    for (int64_t i = 0; i < 9; ++i) pred[i] = rng.uniform(-1, 1);
    const double base = seld::adpit_loss_value(pred, labels);
    for (const auto& p : perms) {
      Array<double> perm(Shape{1, 3, 1, 3});
      for (int n = 0; n < 3; ++n)
        for (int d = 0; d < 3; ++d) perm.at(0, n, 0, d) = pred.at(0, p[n], 0, d);
      EXPECT_EQ(seld::adpit_loss_value(perm, labels), base);  // bitwise
    }
  }
}

TEST(Adpit, LowerBoundAndExactFit) {
  Rng rng(55);
  EventLabelSet labels;
  labels.add(0, {1, 0, -30.0, 12.0});
  labels.add(0, {1, 1, 100.0, -45.0});
  labels.ensure_frames(1);

  Array<double> pred(Shape{1, 3, 13, 3});
  for (int64_t i = 0; i < pred.size(); ++i) pred[i] = rng.uniform(-1, 1);
  EXPECT_GE(seld::adpit_loss_value(pred, labels), 0.0);

  // a candidate target hit exactly gives zero loss
  const Vec3 a = doa_to_unit(-30.0, 12.0), b = doa_to_unit(100.0, -45.0);
  Array<double> exact(Shape{1, 3, 13, 3});
  const Vec3 assign[3] = {a, b, a};  // a surjection of 3 tracks onto 2 events
  for (int n = 0; n < 3; ++n) {
    exact.at(0, n, 1, 0) = assign[n].x;
    exact.at(0, n, 1, 1) = assign[n].y;
    exact.at(0, n, 1, 2) = assign[n].z;
  }
  EXPECT_EQ(seld::adpit_loss_value(exact, labels), 0.0);
}

TEST(Adpit, GraphOpMatchesPlainValueAndGradient) {
  Rng rng(77);
  EventLabelSet labels;
  labels.add(0, {0, 0, 20.0, 10.0});
  labels.add(0, {2, 0, -50.0, 0.0});
  labels.add(1, {0, 0, 25.0, 12.0});
  labels.add(1, {0, 1, -120.0, -30.0});
  labels.ensure_frames(2);

  ad::Var<double> pred(testing::random_array(Shape{2, 3, 4, 3}, rng), true);
  const ad::Var<double> loss = seld::adpit_loss(pred, labels);

  Array<double> plain = pred.value();
  EXPECT_NEAR(loss.value()[0], seld::adpit_loss_value(plain, labels), 1e-12);

  auto r = testing::grad_check({pred}, [&] { return seld::adpit_loss(pred, labels); });
  EXPECT_LT(r.rel_error, 1e-4);
}

TEST(Adpit, ShapeMismatchThrows) {
  EventLabelSet labels;
  labels.ensure_frames(1);
  Array<double> bad(Shape{1, 3, 13, 2});
  EXPECT_THROW(seld::adpit_loss_value(bad, labels), ShapeError);
}

}  // namespace
}  // namespace seldkit
