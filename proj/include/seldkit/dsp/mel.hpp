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

#include "seldkit/dsp/stft.hpp"
#include "seldkit/ndarray.hpp"

namespace seldkit::dsp {

inline double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// Triangular filterbank with HTK mel spacing, peak 1, triangles linear in Hz
// between mel-spaced edge frequencies.
class MelFilterbank {
 public:
  MelFilterbank(int num_filters, int fft_bins, double sample_rate,
                double fmin, double fmax)
      : weights_(Shape{num_filters, fft_bins}), row_sum_(static_cast<size_t>(num_filters), 0.0) {
    const double mel_lo = hz_to_mel(fmin);
    const double mel_hi = hz_to_mel(fmax);
    std::vector<double> edges(static_cast<size_t>(num_filters) + 2);
    for (int m = 0; m < num_filters + 2; ++m)
      edges[static_cast<size_t>(m)] =
          mel_to_hz(mel_lo + (mel_hi - mel_lo) * m / (num_filters + 1));

    const double hz_per_bin = sample_rate / (2.0 * (fft_bins - 1));
    for (int m = 0; m < num_filters; ++m) {
      const double lo = edges[static_cast<size_t>(m)];
      const double mid = edges[static_cast<size_t>(m) + 1];
      const double hi = edges[static_cast<size_t>(m) + 2];
      for (int k = 0; k < fft_bins; ++k) {
        const double f = k * hz_per_bin;
        double w = 0.0;
        if (f > lo && f < hi)
          w = (f <= mid) ? (f - lo) / (mid - lo) : (hi - f) / (hi - mid);
        weights_.at(m, k) = w;
        row_sum_[static_cast<size_t>(m)] += w;
      }
    }
  }

  int num_filters() const { return static_cast<int>(weights_.dim(0)); }
  int fft_bins() const { return static_cast<int>(weights_.dim(1)); }
  double weight(int m, int k) const { return weights_.at(m, k); }
  double row_sum(int m) const { return row_sum_[static_cast<size_t>(m)]; }

  // y[m] = sum_k w[m,k] * x[k]
  void apply(const double* x, double* y) const {
    const int M = num_filters(), K = fft_bins();
    for (int m = 0; m < M; ++m) {
      const double* w = weights_.data() + static_cast<int64_t>(m) * K;
      double acc = 0.0;
      for (int k = 0; k < K; ++k) acc += w[k] * x[k];
      y[m] = acc;
    }
  }

  // Weighted mean per band: y[m] = sum_k w[m,k]*x[k] / sum_k w[m,k].
  void apply_mean(const double* x, double* y) const {
    apply(x, y);
    for (int m = 0; m < num_filters(); ++m) {
      const double s = row_sum_[static_cast<size_t>(m)];
      y[m] = s > 0 ? y[m] / s : 0.0;
    }
  }

 private:
  Array<double> weights_;
  std::vector<double> row_sum_;
};

inline MelFilterbank make_filterbank(const StftConfig& cfg, double sample_rate) {
  return MelFilterbank(cfg.mel_bins, cfg.bins(), sample_rate, cfg.mel_fmin, cfg.mel_fmax);
}

}  // namespace seldkit::dsp
