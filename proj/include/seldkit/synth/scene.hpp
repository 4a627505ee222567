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

#include <json.hpp>

#include "seldkit/augment/avcs.hpp"
#include "seldkit/dsp/foa.hpp"
#include "seldkit/io/image.hpp"
#include "seldkit/labels/accdoa.hpp"

namespace seldkit::synth {

inline constexpr int kFrameRate = 10;  // video fps == label rate

// One synthetic source: class-coded band-limited noise moving linearly in
// azimuth at a fixed elevation.
struct EventSpec {
  int class_id = 0;
  double onset = 0;      // seconds
  double offset = 0;     // seconds
  double azimuth = 0;    // degrees at onset
  double az_rate = 0;    // degrees per second
  double elevation = 0;  // degrees, constant

  double azimuth_at(double t) const { return wrap_azimuth(azimuth + az_rate * (t - onset)); }
};

struct ScenarioSpec {
  uint64_t seed = 0;
  double duration = 3.0;  // seconds
  std::vector<EventSpec> events;
  double snr_db = 30.0;
  int frame_width = 448;
  int frame_height = 224;

  int64_t label_frames() const {
    return static_cast<int64_t>(std::llround(duration * kFrameRate));
  }

  void validate() const;
};

// Class c sounds are band-limited around 300 * (c + 1) Hz with 100 Hz
// bandwidth; the frequency coding is the learnable class cue.
inline double class_center_hz(int class_id) { return 300.0 * (class_id + 1); }
inline constexpr double kClassBandwidthHz = 100.0;

// Label-frame activity window under the round-half-down convention: an event
// labels frame k iff it is active at the frame's center time.
inline std::pair<int64_t, int64_t> active_label_range(const EventSpec& e,
                                                      int64_t num_frames) {
  const int64_t first =
      static_cast<int64_t>(std::ceil(e.onset * kFrameRate - 0.5 - 1e-9));
  const int64_t last =
      static_cast<int64_t>(std::floor(e.offset * kFrameRate - 0.5 + 1e-9));
  return {std::max<int64_t>(0, first), std::min(num_frames - 1, last)};
}

inline void ScenarioSpec::validate() const {
  if (duration <= 0) throw InputError("scenario: duration must be positive");
  if (frame_width != 2 * frame_height)
    throw InputError("scenario: frames must be equirectangular (W = 2H)");
  const int64_t frames = label_frames();
  std::vector<std::vector<int>> counts(static_cast<size_t>(frames),
                                       std::vector<int>(seld::kNumClasses, 0));
  for (const EventSpec& e : events) {
    if (e.class_id < 0 || e.class_id >= seld::kNumClasses)
      throw InputError("scenario: class_id out of range");
    if (!(e.onset < e.offset) || e.offset > duration + 1e-9)
      throw InputError("scenario: need onset < offset <= duration");
    if (e.elevation < -90 || e.elevation > 90)
      throw InputError("scenario: elevation out of range");
    const auto [first, last] = active_label_range(e, frames);
    for (int64_t k = first; k <= last; ++k)
      if (++counts[static_cast<size_t>(k)][static_cast<size_t>(e.class_id)] >
          seld::kNumTracks)
        throw InputError("scenario: more than " + std::to_string(seld::kNumTracks) +
                         " simultaneous events of class " + std::to_string(e.class_id) +
                         " at frame " + std::to_string(k));
  }
}

// FOA rendering: per event, a sum of random-phase cosines inside the class
// band, shaped by onset/offset ramps and a slow amplitude modulation, encoded
// with time-varying SN3D gains; plus spatially white Gaussian noise scaled to
// the requested SNR against the W-channel event power over active samples.
inline dsp::FoaClip render_audio(const ScenarioSpec& spec) {
  spec.validate();
  const int64_t S = static_cast<int64_t>(std::llround(spec.duration * dsp::kSampleRate));
  dsp::FoaClip clip{Array<double>(Shape{dsp::kFoaChannels, S}), dsp::kSampleRate};
  Rng rng(spec.seed);

  constexpr int kPartials = 32;
  constexpr double kRampSeconds = 0.02;
  double active_power = 0;
  int64_t active_samples = 0;

  for (const EventSpec& e : spec.events) {
    std::vector<double> freq(kPartials), phase(kPartials);
    for (int p = 0; p < kPartials; ++p) {
      freq[static_cast<size_t>(p)] = rng.uniform(class_center_hz(e.class_id) - kClassBandwidthHz / 2,
                                                 class_center_hz(e.class_id) + kClassBandwidthHz / 2);
      phase[static_cast<size_t>(p)] = rng.uniform(0, 2 * kPi);
    }
    const double am_phase = rng.uniform(0, 2 * kPi);
    const double amp = 1.0 / std::sqrt(static_cast<double>(kPartials) / 2.0);

    const int64_t s0 = std::max<int64_t>(0, static_cast<int64_t>(e.onset * dsp::kSampleRate));
    const int64_t s1 = std::min(S, static_cast<int64_t>(e.offset * dsp::kSampleRate));
    for (int64_t i = s0; i < s1; ++i) {
      const double t = static_cast<double>(i) / dsp::kSampleRate;
      double s = 0;
      for (int p = 0; p < kPartials; ++p)
        s += std::cos(2 * kPi * freq[static_cast<size_t>(p)] * t + phase[static_cast<size_t>(p)]);
      const double ramp_in = std::min(1.0, (t - e.onset) / kRampSeconds);
      const double ramp_out = std::min(1.0, (e.offset - t) / kRampSeconds);
      const double env = amp * ramp_in * ramp_out * (0.85 + 0.15 * std::sin(2 * kPi * 3.0 * t + am_phase));
      s *= env;

      double g[4];
      dsp::foa_gains(e.azimuth_at(t), e.elevation, g);
      clip.samples.at(dsp::kW, i) += s * g[dsp::kW];
      clip.samples.at(dsp::kY, i) += s * g[dsp::kY];
      clip.samples.at(dsp::kZ, i) += s * g[dsp::kZ];
      clip.samples.at(dsp::kX, i) += s * g[dsp::kX];
      active_power += (s * g[dsp::kW]) * (s * g[dsp::kW]);
      ++active_samples;
    }
  }

  // diffuse noise floor, independent per channel
  double sigma;
  if (active_samples > 0) {
    const double p_sig = active_power / static_cast<double>(active_samples);
    sigma = std::sqrt(p_sig * std::pow(10.0, -spec.snr_db / 10.0));
  } else {
    sigma = 1e-4;  // event-free scene: a quiet floor so features stay finite
  }
  for (int ch = 0; ch < dsp::kFoaChannels; ++ch)
    for (int64_t i = 0; i < S; ++i) clip.samples.at(ch, i) += sigma * rng.normal();
  return clip;
}

inline io::Image class_color(int class_id) {
  // distinct hues around the wheel, full saturation
  const double h = 360.0 * class_id / seld::kNumClasses;
  const double x = 1.0 - std::abs(std::fmod(h / 60.0, 2.0) - 1.0);
  double r = 0, g = 0, b = 0;
  if (h < 60) { r = 1; g = x; }
  else if (h < 120) { r = x; g = 1; }
  else if (h < 180) { g = 1; b = x; }
  else if (h < 240) { g = x; b = 1; }
  else if (h < 300) { r = x; b = 1; }
  else { r = 1; b = x; }
  io::Image swatch(1, 1);
  swatch.rgb[0] = static_cast<uint8_t>(55 + 200 * r);
  swatch.rgb[1] = static_cast<uint8_t>(55 + 200 * g);
  swatch.rgb[2] = static_cast<uint8_t>(55 + 200 * b);
  return swatch;
}

inline constexpr double kBlobSigmaPx = 6.0;
inline constexpr uint8_t kBackgroundGray = 60;

// 10 fps equirectangular frames: gray background, one Gaussian blob per
// active event at the pixel of its DOA, hue indexed by class. Columns wrap.
inline std::vector<io::Image> render_frames(const ScenarioSpec& spec) {
  spec.validate();
  const int W = spec.frame_width, H = spec.frame_height;
  const int64_t n = spec.label_frames();
  std::vector<io::Image> frames;
  frames.reserve(static_cast<size_t>(n));

  for (int64_t k = 0; k < n; ++k) {
    io::Image img(H, W, kBackgroundGray);
    const double t = (static_cast<double>(k) + 0.5) / kFrameRate;
    for (const EventSpec& e : spec.events) {
      const auto [first, last] = active_label_range(e, n);
      if (k < first || k > last) continue;
      const double u0 = avcs::azimuth_to_column(e.azimuth_at(t), W);
      const double v0 = avcs::elevation_to_row(e.elevation, H);
      const io::Image color = class_color(e.class_id);
      const int radius = static_cast<int>(std::ceil(4 * kBlobSigmaPx));
      const int vc = static_cast<int>(std::round(v0));
      const int uc = static_cast<int>(std::round(u0));
      for (int dv = -radius; dv <= radius; ++dv) {
        const int v = vc + dv;
        if (v < 0 || v >= H) continue;
        for (int du = -radius; du <= radius; ++du) {
          const int u = ((uc + du) % W + W) % W;
          double dcol = std::abs(static_cast<double>(uc + du) - u0);
          dcol = std::min(dcol, W - dcol);  // circular column distance
          const double drow = static_cast<double>(v) - v0;
          const double w = std::exp(-(dcol * dcol + drow * drow) / (2 * kBlobSigmaPx * kBlobSigmaPx));
          uint8_t* px = img.pixel(v, u);
          for (int c = 0; c < 3; ++c) {
            const double blended = px[c] + w * (color.rgb[static_cast<size_t>(c)] - px[c]);
            px[c] = static_cast<uint8_t>(std::lround(std::clamp(blended, 0.0, 255.0)));
          }
        }
      }
    }
    frames.push_back(std::move(img));
  }
  return frames;
}

// 100 ms labels with trajectory angles interpolated at frame centers.
inline seld::EventLabelSet render_labels(const ScenarioSpec& spec) {
  spec.validate();
  const int64_t n = spec.label_frames();
  seld::EventLabelSet labels;
  labels.ensure_frames(n);
  int source_id = 0;
  for (const EventSpec& e : spec.events) {
    const auto [first, last] = active_label_range(e, n);
    for (int64_t k = first; k <= last; ++k) {
      const double t = (static_cast<double>(k) + 0.5) / kFrameRate;
      labels.frames[static_cast<size_t>(k)].push_back(
          {e.class_id, source_id, e.azimuth_at(t), e.elevation});
    }
    ++source_id;
  }
  return labels;
}

struct Scene {
  dsp::FoaClip audio;
  std::vector<io::Image> frames;
  seld::EventLabelSet labels;
};

inline Scene render_scene(const ScenarioSpec& spec) {
  return {render_audio(spec), render_frames(spec), render_labels(spec)};
}

// The AVCS image of a scenario: events move with the rotated/flipped field.
inline ScenarioSpec transform_spec(const ScenarioSpec& spec, const avcs::AvcsTransform& t) {
  ScenarioSpec out = spec;
  for (EventSpec& e : out.events) {
    e.azimuth = wrap_azimuth(e.azimuth + 90.0 * t.rotation_k);
    if (t.elev_flip) e.elevation = -e.elevation;
  }
  return out;
}

inline void to_json(nlohmann::json& j, const EventSpec& e) {
  j = {{"class_id", e.class_id}, {"onset", e.onset},       {"offset", e.offset},
       {"azimuth", e.azimuth},   {"az_rate", e.az_rate},   {"elevation", e.elevation}};
}

inline void from_json(const nlohmann::json& j, EventSpec& e) {
  j.at("class_id").get_to(e.class_id);
  j.at("onset").get_to(e.onset);
  j.at("offset").get_to(e.offset);
  j.at("azimuth").get_to(e.azimuth);
  e.az_rate = j.value("az_rate", 0.0);
  j.at("elevation").get_to(e.elevation);
}

inline void to_json(nlohmann::json& j, const ScenarioSpec& s) {
  j = {{"seed", s.seed},       {"duration", s.duration},
       {"events", s.events},   {"snr_db", s.snr_db},
       {"frame_width", s.frame_width}, {"frame_height", s.frame_height}};
}

inline void from_json(const nlohmann::json& j, ScenarioSpec& s) {
  j.at("seed").get_to(s.seed);
  j.at("duration").get_to(s.duration);
  j.at("events").get_to(s.events);
  s.snr_db = j.value("snr_db", 30.0);
  s.frame_width = j.value("frame_width", 448);
  s.frame_height = j.value("frame_height", 224);
}

}  // namespace seldkit::synth
