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

#include <complex>

#include "seldkit/dsp/mel.hpp"
#include "seldkit/dsp/stft.hpp"
#include "seldkit/ndarray.hpp"

namespace seldkit::dsp {

inline constexpr int kFeatureChannels = 7;

// 7-channel input feature tensor, shape [7 x T_in x F_in]. Channel layout:
// 4 log-mel spectrograms in (W,Y,Z,X) order followed by the 3 intensity
// vector components in (x,y,z) order.
struct SpectralFeatures {
  Array<float> data;

  int64_t frames() const { return data.dim(1); }
  int64_t mel_bins() const { return data.dim(2); }

  void validate() const {
    if (data.ndim() != 3 || data.dim(0) != kFeatureChannels)
      throw ShapeError("SpectralFeatures: expected [7 x T x F], got " +
                       shape_str(data.shape()));
  }
};

// Log-mel spectrograms of the 4 FOA channels: power spectrum -> triangular
// mel filterbank -> ln(. + log_floor). Output [4 x T x mel_bins]. Math runs
// in double; T picks the storage precision (float for the pipeline tensor).
// Note: at 128 bands over a 257-bin spectrum the lowest triangles are
// narrower than one FFT bin, so a few low bands have zero weight and sit at
// the log floor.
template <typename T = float>
Array<T> logmel(const ComplexSpec& spec, const StftConfig& cfg,
                double sample_rate = kSampleRate) {
  if (spec.ndim() != 3 || spec.dim(2) != cfg.bins())
    throw ShapeError("logmel: spectrum bins " + shape_str(spec.shape()) +
                     " do not match config (" + std::to_string(cfg.bins()) + ")");
  const int64_t C = spec.dim(0), Tn = spec.dim(1);
  const int K = cfg.bins(), M = cfg.mel_bins;
  const MelFilterbank fb = make_filterbank(cfg, sample_rate);

  Array<T> out(Shape{C, Tn, M});
  std::vector<double> power(static_cast<size_t>(K));
  std::vector<double> mel(static_cast<size_t>(M));
  for (int64_t c = 0; c < C; ++c)
    for (int64_t t = 0; t < Tn; ++t) {
      const std::complex<double>* row = spec.data() + (c * Tn + t) * K;
      for (int k = 0; k < K; ++k) power[static_cast<size_t>(k)] = std::norm(row[k]);
      fb.apply(power.data(), mel.data());
      T* o = out.data() + (c * Tn + t) * M;
      for (int m = 0; m < M; ++m)
        o[m] = static_cast<T>(std::log(mel[static_cast<size_t>(m)] + cfg.log_floor));
    }
  return out;
}

// Acoustic intensity vectors in mel space. Per TF bin:
//   I = Re(conj(W) * [X, Y, Z]) / (E + eps * mean_frame(E)),
//   E = |W|^2 + (|X|^2 + |Y|^2 + |Z|^2) / 3,
// then a weighted mean per mel band with the same filterbank, clamped to
// [-1, 1]. Output [3 x T x mel_bins], component order (x, y, z). The guard
// is relative to the frame energy so the normalized IV is invariant under
// positive scaling of the clip; an all-zero frame yields zero vectors.
template <typename T = float>
Array<T> intensity_vectors(const ComplexSpec& spec, const StftConfig& cfg,
                           double sample_rate = kSampleRate) {
  if (spec.ndim() != 3 || spec.dim(0) != kFoaChannels || spec.dim(2) != cfg.bins())
    throw ShapeError("intensity_vectors: expected [4 x T x " +
                     std::to_string(cfg.bins()) + "], got " + shape_str(spec.shape()));
  const int64_t Tn = spec.dim(1);
  const int K = cfg.bins(), M = cfg.mel_bins;
  const MelFilterbank fb = make_filterbank(cfg, sample_rate);

  Array<T> out(Shape{3, Tn, M});
  std::vector<double> iv(static_cast<size_t>(K));
  std::vector<double> band(static_cast<size_t>(M));
  std::vector<double> energy(static_cast<size_t>(K));
  for (int64_t t = 0; t < Tn; ++t) {
    const std::complex<double>* w = spec.data() + (kW * Tn + t) * K;
    const std::complex<double>* y = spec.data() + (kY * Tn + t) * K;
    const std::complex<double>* z = spec.data() + (kZ * Tn + t) * K;
    const std::complex<double>* x = spec.data() + (kX * Tn + t) * K;
    double frame_mean = 0;
    for (int k = 0; k < K; ++k) {
      energy[static_cast<size_t>(k)] =
          std::norm(w[k]) + (std::norm(x[k]) + std::norm(y[k]) + std::norm(z[k])) / 3.0;
      frame_mean += energy[static_cast<size_t>(k)];
    }
    frame_mean /= K;
    for (int comp = 0; comp < 3; ++comp) {
      const std::complex<double>* dip = comp == 0 ? x : (comp == 1 ? y : z);
      for (int k = 0; k < K; ++k) {
        const double denom = energy[static_cast<size_t>(k)] + cfg.iv_eps * frame_mean;
        iv[static_cast<size_t>(k)] =
            denom > 0 ? (std::conj(w[k]) * dip[k]).real() / denom : 0.0;
      }
      fb.apply_mean(iv.data(), band.data());
      T* o = out.data() + (comp * Tn + t) * M;
      for (int m = 0; m < M; ++m)
        o[m] = static_cast<T>(std::clamp(band[static_cast<size_t>(m)], -1.0, 1.0));
    }
  }
  return out;
}

// [log-mel(W,Y,Z,X) || IV(x,y,z)] along the channel axis; 7 x 480 x 128 for a
// 3 s clip at 24 kHz.
inline SpectralFeatures extract_features(const FoaClip& clip, const StftConfig& cfg) {
  const ComplexSpec spec = stft(clip, cfg);
  const Array<float> lm = logmel<float>(spec, cfg, clip.sample_rate);
  const Array<float> iv = intensity_vectors<float>(spec, cfg, clip.sample_rate);
  const int64_t T = spec.dim(1);
  const int M = cfg.mel_bins;

  SpectralFeatures feat{Array<float>(Shape{kFeatureChannels, T, M})};
  std::copy(lm.data(), lm.data() + lm.size(), feat.data.data());
  std::copy(iv.data(), iv.data() + iv.size(), feat.data.data() + lm.size());
  return feat;
}

// Energy-weighted DOA estimate from the IV channels of a feature tensor over
// the STFT frame range [t0, t1). Weights come from the W-channel mel power.
inline Vec3 estimate_doa_vector(const SpectralFeatures& feat, const StftConfig& cfg,
                                int64_t t0, int64_t t1) {
  feat.validate();
  const int64_t T = feat.frames(), M = feat.mel_bins();
  t0 = std::max<int64_t>(0, t0);
  t1 = std::min(T, t1);
  Vec3 acc;
  for (int64_t t = t0; t < t1; ++t)
    for (int64_t m = 0; m < M; ++m) {
      const double w =
          std::exp(static_cast<double>(feat.data.at(0, t, m))) - cfg.log_floor;
      const double weight = std::max(w, 0.0);
      acc.x += weight * feat.data.at(4, t, m);
      acc.y += weight * feat.data.at(5, t, m);
      acc.z += weight * feat.data.at(6, t, m);
    }
  return acc;
}

inline AzEl estimate_doa(const SpectralFeatures& feat, const StftConfig& cfg,
                         int64_t t0, int64_t t1) {
  return unit_to_doa(estimate_doa_vector(feat, cfg, t0, t1));
}

}  // namespace seldkit::dsp
