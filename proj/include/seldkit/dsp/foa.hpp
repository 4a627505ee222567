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

#include "seldkit/common.hpp"
#include "seldkit/ndarray.hpp"

namespace seldkit::dsp {

// ACN channel indices under the (W, Y, Z, X) ordering used throughout.
enum FoaChannel : int { kW = 0, kY = 1, kZ = 2, kX = 3 };

inline constexpr int kFoaChannels = 4;
inline constexpr int kSampleRate = 24000;

// 4-channel first-order ambisonic clip, ACN order (W,Y,Z,X), SN3D
// normalization. samples is [4 x S].
struct FoaClip {
  Array<double> samples;
  int sample_rate = kSampleRate;

  int64_t num_samples() const { return samples.ndim() == 2 ? samples.dim(1) : 0; }
  double duration_seconds() const {
    return static_cast<double>(num_samples()) / sample_rate;
  }

  void validate() const {
    if (samples.ndim() != 2 || samples.dim(0) != kFoaChannels)
      throw InputError("FoaClip: expected 4 channels, got shape " +
                       shape_str(samples.shape()));
    if (samples.dim(1) <= 0) throw InputError("FoaClip: empty clip");
    if (sample_rate <= 0) throw InputError("FoaClip: bad sample rate");
    if (!samples.all_finite()) throw InputError("FoaClip: non-finite samples");
  }
};

// SN3D plane-wave encoding gains for a source at (az, el) degrees,
// in (W, Y, Z, X) channel order.
inline void foa_gains(double az_deg, double el_deg, double out[4]) {
  const Vec3 u = doa_to_unit(az_deg, el_deg);
  out[kW] = 1.0;
  out[kY] = u.y;
  out[kZ] = u.z;
  out[kX] = u.x;
}

}  // namespace seldkit::dsp
