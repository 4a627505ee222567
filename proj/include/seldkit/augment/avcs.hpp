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

#include <vector>

#include "seldkit/dsp/foa.hpp"
#include "seldkit/io/image.hpp"
#include "seldkit/labels/event_labels.hpp"

namespace seldkit::avcs {

// One member of the x8 audio-visual channel-swap family: an azimuth rotation
// by rotation_k * 90 degrees optionally composed with an elevation flip. The
// two parts commute, so the family is a closed group of 8.
struct AvcsTransform {
  int rotation_k = 0;     // 0..3
  bool elev_flip = false;

  static AvcsTransform identity() { return {0, false}; }

  static std::vector<AvcsTransform> all8() {
    std::vector<AvcsTransform> out;
    for (int k = 0; k < 4; ++k)
      for (int f = 0; f < 2; ++f) out.push_back({k, f != 0});
    return out;
  }

  AvcsTransform then(const AvcsTransform& next) const {
    return {(rotation_k + next.rotation_k) % 4,
            elev_flip != next.elev_flip};
  }

  bool operator==(const AvcsTransform& o) const {
    return rotation_k == o.rotation_k && elev_flip == o.elev_flip;
  }

  void validate() const {
    if (rotation_k < 0 || rotation_k > 3)
      throw InputError("AvcsTransform: rotation_k must be 0..3");
  }
};

inline AzEl transform_doa(double az, double el, const AvcsTransform& t) {
  return {wrap_azimuth(az + 90.0 * t.rotation_k), t.elev_flip ? -el : el};
}

inline seld::EventLabelSet transform_labels(const seld::EventLabelSet& labels,
                                            const AvcsTransform& t) {
  t.validate();
  seld::EventLabelSet out = labels;
  for (auto& frame : out.frames)
    for (seld::Event& e : frame) {
      const AzEl d = transform_doa(e.azimuth, e.elevation, t);
      e.azimuth = d.azimuth;
      e.elevation = d.elevation;
    }
  return out;
}

// Pure channel swaps/negations on ACN (W,Y,Z,X):
//   W unchanged; Z negated iff elev_flip;
//   k=1: X'=-Y, Y'=X; k=2: X'=-X, Y'=-Y; k=3: X'=Y, Y'=-X.
inline dsp::FoaClip transform_foa(const dsp::FoaClip& clip, const AvcsTransform& t) {
  t.validate();
  clip.validate();
  const int64_t S = clip.num_samples();
  dsp::FoaClip out{Array<double>(Shape{dsp::kFoaChannels, S}), clip.sample_rate};

  const double* w = clip.samples.data() + dsp::kW * S;
  const double* y = clip.samples.data() + dsp::kY * S;
  const double* z = clip.samples.data() + dsp::kZ * S;
  const double* x = clip.samples.data() + dsp::kX * S;
  double* ow = out.samples.data() + dsp::kW * S;
  double* oy = out.samples.data() + dsp::kY * S;
  double* oz = out.samples.data() + dsp::kZ * S;
  double* ox = out.samples.data() + dsp::kX * S;

  const double zs = t.elev_flip ? -1.0 : 1.0;
  for (int64_t i = 0; i < S; ++i) {
    ow[i] = w[i];
    oz[i] = zs * z[i];
    switch (t.rotation_k) {
      case 0: ox[i] = x[i];  oy[i] = y[i];  break;
      case 1: ox[i] = -y[i]; oy[i] = x[i];  break;
      case 2: ox[i] = -x[i]; oy[i] = -y[i]; break;
      case 3: ox[i] = y[i];  oy[i] = -x[i]; break;
    }
  }
  return out;
}

inline void check_equirect(const io::Image& frame) {
  if (frame.width != 2 * frame.height)
    throw InputError("equirect frame: width must be 2x height, got " +
                     std::to_string(frame.width) + "x" + std::to_string(frame.height));
  if (frame.width % 4 != 0)
    throw InputError("equirect frame: width must be divisible by 4");
}

// Equirectangular counterpart of the FOA transform: a circular column shift
// of rotation_k * W/4 (content moves toward increasing azimuth) and a
// vertical flip for the elevation flip. Column 0 is azimuth -180 deg, row 0
// is elevation +90 deg.
inline io::Image transform_frame(const io::Image& frame, const AvcsTransform& t) {
  t.validate();
  check_equirect(frame);
  const int H = frame.height, W = frame.width;
  const int shift = t.rotation_k * (W / 4);

  io::Image out(H, W);
  for (int r = 0; r < H; ++r) {
    const int src_r = t.elev_flip ? H - 1 - r : r;
    for (int c = 0; c < W; ++c) {
      const int src_c = (c - shift + W) % W;
      std::memcpy(out.pixel(r, c), frame.pixel(src_r, src_c), 3);
    }
  }
  return out;
}

struct AvExample {
  dsp::FoaClip audio;
  seld::EventLabelSet labels;
  std::vector<io::Image> frames;
};

// Applies the same transform to all three modalities.
inline AvExample augment_example(const dsp::FoaClip& audio,
                                 const seld::EventLabelSet& labels,
                                 const std::vector<io::Image>& frames,
                                 const AvcsTransform& t) {
  AvExample out;
  out.audio = transform_foa(audio, t);
  out.labels = transform_labels(labels, t);
  out.frames.reserve(frames.size());
  for (const io::Image& f : frames) out.frames.push_back(transform_frame(f, t));
  return out;
}

// Pixel column whose center maps to the given azimuth (continuous).
inline double azimuth_to_column(double az_deg, int width) {
  return (az_deg + 180.0) * width / 360.0 - 0.5;
}
inline double elevation_to_row(double el_deg, int height) {
  return (90.0 - el_deg) * height / 180.0 - 0.5;
}
inline double column_to_azimuth(double col, int width) {
  return -180.0 + (col + 0.5) * 360.0 / width;
}
inline double row_to_elevation(double row, int height) {
  return 90.0 - (row + 0.5) * 180.0 / height;
}

}  // namespace seldkit::avcs
