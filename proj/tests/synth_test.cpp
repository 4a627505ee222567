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

#include "seldkit/dsp/features.hpp"
#include "seldkit/synth/scene.hpp"

namespace seldkit {
namespace {

using synth::EventSpec;
using synth::ScenarioSpec;

// Circular-mean blob centroid of the difference from the gray background.
std::pair<double, double> blob_centroid(const io::Image& img) {
  double sum_sin = 0, sum_cos = 0, sum_row = 0, sum_w = 0;
  for (int v = 0; v < img.height; ++v)
    for (int u = 0; u < img.width; ++u) {
      const uint8_t* px = img.pixel(v, u);
      double w = 0;
      for (int c = 0; c < 3; ++c)
        w += std::abs(static_cast<double>(px[c]) - synth::kBackgroundGray);
      if (w == 0) continue;
      const double ang = 2 * kPi * (u + 0.5) / img.width;
      sum_sin += w * std::sin(ang);
      sum_cos += w * std::cos(ang);
      sum_row += w * v;
      sum_w += w;
    }
  if (sum_w == 0) return {-1, -1};
  double col = std::atan2(sum_sin, sum_cos) / (2 * kPi) * img.width - 0.5;
  if (col < 0) col += img.width;
  return {col, sum_row / sum_w};
}

ScenarioSpec single_event_spec(double az, double el, uint64_t seed,
                               double snr = 30.0) {
  ScenarioSpec spec;
  spec.seed = seed;
  spec.duration = 3.0;
  spec.snr_db = snr;
  spec.events.push_back({4, 0.3, 2.7, az, 0.0, el});
  return spec;
}

TEST(RenderAudio, StaticEventDoaRecoverable) {
  const double az = 40.0, el = 15.0;
  const auto clip = synth::render_audio(single_event_spec(az, el, 7));
  EXPECT_EQ(clip.num_samples(), 72000);

  dsp::StftConfig cfg;
  const auto feat = dsp::extract_features(clip, cfg);
  // interior active frames: label frames 5..25 -> stft frames 80..400
  const AzEl doa = dsp::estimate_doa(feat, cfg, 80, 400);
  EXPECT_LT(great_circle_deg(doa.azimuth, doa.elevation, az, el), 2.0);
}

TEST(RenderAudio, NoEventsIsQuietNoise) {
  ScenarioSpec spec;
  spec.seed = 3;
  spec.duration = 1.0;
  const auto clip = synth::render_audio(spec);
  dsp::StftConfig cfg;
  const auto feat = dsp::extract_features(clip, cfg);
  // IV magnitudes near zero: independent channels carry no coherent direction
  const Vec3 v = dsp::estimate_doa_vector(feat, cfg, 0, feat.frames());
  double energy = 0;
  for (int64_t t = 0; t < feat.frames(); ++t)
    for (int64_t m = 0; m < 128; ++m)
      energy += std::exp(feat.data.at(0, t, m));
  EXPECT_LT(v.norm() / energy, 0.5);
}

TEST(RenderAudio, DeterministicPerSeed) {
  const ScenarioSpec spec = single_event_spec(-120, -30, 99);
  const auto a = synth::render_audio(spec);
  const auto b = synth::render_audio(spec);
  for (int64_t i = 0; i < a.samples.size(); ++i)
    EXPECT_EQ(a.samples[i], b.samples[i]);
}

TEST(RenderAudio, MeasuredSnrWithinOneDb) {
  const double snr_db = 24.0;
  ScenarioSpec spec;
  spec.seed = 13;
  spec.duration = 3.0;
  spec.snr_db = snr_db;
  spec.events.push_back({2, 0.5, 1.5, 60.0, 0.0, 0.0});
  const auto clip = synth::render_audio(spec);

  // noise power from the silent tail, signal+noise from the active middle
  auto power = [&](int64_t s0, int64_t s1) {
    double p = 0;
    for (int64_t i = s0; i < s1; ++i)
      p += clip.samples.at(dsp::kW, i) * clip.samples.at(dsp::kW, i);
    return p / static_cast<double>(s1 - s0);
  };
  const double p_noise = power(48000, 71000);
  const double p_active = power(static_cast<int64_t>(0.55 * 24000),
                                static_cast<int64_t>(1.45 * 24000));
  const double measured = 10.0 * std::log10((p_active - p_noise) / p_noise);
  EXPECT_NEAR(measured, snr_db, 1.0);
}

TEST(RenderAudio, CapacityViolationRejected) {
  ScenarioSpec spec;
  spec.duration = 2.0;
  for (int i = 0; i < 4; ++i) spec.events.push_back({5, 0.2, 1.8, -90.0 + 40 * i, 0, 0});
  EXPECT_THROW(synth::render_audio(spec), InputError);
}

TEST(RenderFrames, BlobAtFrontCenter) {
  const auto frames = synth::render_frames(single_event_spec(0, 0, 5));
  ASSERT_EQ(frames.size(), 30u);
  const auto [col, row] = blob_centroid(frames[15]);
  // az 0, el 0 maps to (W/2 - 0.5, H/2 - 0.5)
  EXPECT_NEAR(col, 448.0 / 2 - 0.5, 1.0);
  EXPECT_NEAR(row, 224.0 / 2 - 0.5, 1.0);
}

TEST(RenderFrames, EmptySpecIsUniform) {
  ScenarioSpec spec;
  spec.duration = 0.5;
  const auto frames = synth::render_frames(spec);
  ASSERT_EQ(frames.size(), 5u);
  for (const auto& f : frames)
    for (uint8_t v : f.rgb) EXPECT_EQ(v, synth::kBackgroundGray);
}

TEST(RenderFrames, CentroidTracksMovingSource) {
  ScenarioSpec spec;
  spec.seed = 21;
  spec.duration = 3.0;
  spec.events.push_back({1, 0.0, 3.0, -40.0, 20.0, 10.0});  // 20 deg/s sweep
  const auto frames = synth::render_frames(spec);
  for (size_t k = 2; k < frames.size(); k += 5) {
    const double t = (static_cast<double>(k) + 0.5) / synth::kFrameRate;
    const double az = spec.events[0].azimuth_at(t);
    const auto [col, row] = blob_centroid(frames[k]);
    EXPECT_NEAR(col, avcs::azimuth_to_column(az, 448), 1.0) << "frame " << k;
    EXPECT_NEAR(row, avcs::elevation_to_row(10.0, 224), 1.0);
  }
}

TEST(RenderLabels, FrameCountAndQuantization) {
  ScenarioSpec spec;
  spec.duration = 3.0;
  spec.events.push_back({3, 0.95, 1.25, 10.0, 0.0, 5.0});
  const auto labels = synth::render_labels(spec);
  EXPECT_EQ(labels.num_frames(), 30);
  // active at frame centers 0.95..1.25 s -> frames 9..12 inclusive
  for (int64_t k = 0; k < 30; ++k) {
    const bool active = k >= 9 && k <= 12;
    EXPECT_EQ(labels.frames[static_cast<size_t>(k)].size(), active ? 1u : 0u)
        << "frame " << k;
  }
}

TEST(RenderLabels, EmptySpecEmptyLabels) {
  ScenarioSpec spec;
  spec.duration = 1.0;
  const auto labels = synth::render_labels(spec);
  EXPECT_EQ(labels.num_frames(), 10);
  EXPECT_EQ(labels.total_events(), 0);
}

TEST(Scene, CrossModalAlignment) {
  Rng rng(424242);
  dsp::StftConfig cfg;
  for (int trial = 0; trial < 4; ++trial) {
    ScenarioSpec spec;
    spec.seed = 1000 + static_cast<uint64_t>(trial);
    spec.duration = 3.0;
    spec.snr_db = 40.0;
    spec.events.push_back({static_cast<int>(rng.uniform_int(0, 12)), 0.2, 2.8,
                           rng.uniform(-180, 180), 0.0, rng.uniform(-55, 55)});
    const synth::Scene scene = synth::render_scene(spec);
    const auto feat = dsp::extract_features(scene.audio, cfg);

    for (int64_t k = 5; k < 25; k += 7) {
      const auto& frame_labels = scene.labels.frames[static_cast<size_t>(k)];
      ASSERT_EQ(frame_labels.size(), 1u);
      const seld::Event& lab = frame_labels[0];
      // label vs spec: exact
      EXPECT_DOUBLE_EQ(lab.azimuth, spec.events[0].azimuth);
      // IV estimate vs label: within 2 degrees
      const AzEl doa = dsp::estimate_doa(feat, cfg, k * 16, (k + 1) * 16);
      EXPECT_LT(great_circle_deg(doa.azimuth, doa.elevation, lab.azimuth, lab.elevation),
                2.0);
      // blob centroid vs label pixel: within 1 px
      const auto [col, row] = blob_centroid(scene.frames[static_cast<size_t>(k)]);
      EXPECT_NEAR(col, avcs::azimuth_to_column(lab.azimuth, spec.frame_width), 1.0);
      EXPECT_NEAR(row, avcs::elevation_to_row(lab.elevation, spec.frame_height), 1.0);
    }
  }
}

TEST(Scene, SpecJsonRoundTrip) {
  ScenarioSpec spec;
  spec.seed = 5;
  spec.duration = 2.5;
  spec.snr_db = 18.0;
  spec.events.push_back({7, 0.1, 2.0, -33.0, 12.5, 44.0});
  nlohmann::json j = spec;
  const ScenarioSpec back = j.get<ScenarioSpec>();
  EXPECT_EQ(back.seed, spec.seed);
  EXPECT_EQ(back.events.size(), 1u);
  EXPECT_DOUBLE_EQ(back.events[0].az_rate, 12.5);
  EXPECT_DOUBLE_EQ(back.snr_db, 18.0);
}

}  // namespace
}  // namespace seldkit
