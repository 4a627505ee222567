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
#include <vector>

#include "seldkit/dsp/fft.hpp"
#include "seldkit/dsp/foa.hpp"
#include "seldkit/ndarray.hpp"

namespace seldkit::dsp {

struct StftConfig {
  int window = 512;       // Hann analysis window, power of two
  int hop = 150;          // samples
  int mel_bins = 128;
  double mel_fmin = 20.0;     // Hz
  double mel_fmax = 12000.0;  // Hz
  double log_floor = 1e-10;
  double iv_eps = 1e-8;

  int bins() const { return window / 2 + 1; }
  void validate() const {
    if (window <= 0 || (window & (window - 1)) != 0)
      throw ConfigError("StftConfig: window must be a power of two");
    if (hop <= 0 || hop > window) throw ConfigError("StftConfig: need 0 < hop <= window");
    if (mel_bins <= 0) throw ConfigError("StftConfig: mel_bins must be positive");
    if (!(mel_fmin >= 0) || !(mel_fmax > mel_fmin))
      throw ConfigError("StftConfig: bad mel range");
    if (!(log_floor > 0)) throw ConfigError("StftConfig: log_floor must be positive");
  }
};

// Frame-count law: one frame per hop, frame t centered at t*hop.
inline int64_t stft_num_frames(int64_t num_samples, const StftConfig& cfg) {
  return (num_samples + cfg.hop - 1) / cfg.hop;
}

inline std::vector<double> hann_window(int n) {
  std::vector<double> w(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    w[static_cast<size_t>(i)] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / n);
  return w;
}

// Reflect an arbitrary index into [0, n-1], mirroring about the end samples
// (x[-i] = x[i]); handles indices further out than one period.
inline int64_t reflect_index(int64_t i, int64_t n) {
  if (n == 1) return 0;
  const int64_t period = 2 * (n - 1);
  int64_t m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - m;
}

using ComplexSpec = Array<std::complex<double>>;  // [channels x T x bins]

// Centered STFT with reflection padding. A 72000-sample clip at hop 150
// yields exactly 480 frames.
inline ComplexSpec stft(const FoaClip& clip, const StftConfig& cfg) {
  clip.validate();
  cfg.validate();

  const int64_t n_samp = clip.num_samples();
  const int64_t n_frames = stft_num_frames(n_samp, cfg);
  const int bins = cfg.bins();
  const int win = cfg.window;
  const int half = win / 2;
  const std::vector<double> w = hann_window(win);

  ComplexSpec out(Shape{kFoaChannels, n_frames, bins});
  std::vector<std::complex<double>> buf(static_cast<size_t>(win));

  for (int ch = 0; ch < kFoaChannels; ++ch) {
    const double* x = clip.samples.data() + ch * n_samp;
    for (int64_t t = 0; t < n_frames; ++t) {
      const int64_t center = t * cfg.hop;
      for (int i = 0; i < win; ++i) {
        const int64_t idx = reflect_index(center - half + i, n_samp);
        buf[static_cast<size_t>(i)] = {x[idx] * w[static_cast<size_t>(i)], 0.0};
      }
      fft_radix2(buf);
      std::complex<double>* row = out.data() + (ch * n_frames + t) * bins;
      for (int k = 0; k < bins; ++k) row[k] = buf[static_cast<size_t>(k)];
    }
  }
  return out;
}

}  // namespace seldkit::dsp
