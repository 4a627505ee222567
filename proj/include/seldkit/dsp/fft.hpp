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

#include "seldkit/common.hpp"

namespace seldkit::dsp {

// In-place iterative radix-2 FFT. Size must be a power of two; that covers
// the 512-point analysis window and keeps the library free of FFT
// dependencies.
inline void fft_radix2(std::vector<std::complex<double>>& x) {
  const size_t n = x.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw InputError("fft_radix2: size must be a nonzero power of two");

  // bit-reversal permutation
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }

  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = x[i + k];
        std::complex<double> v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// One-sided DFT of a real frame: returns n/2 + 1 bins.
inline std::vector<std::complex<double>> rfft(const std::vector<double>& frame) {
  std::vector<std::complex<double>> buf(frame.size());
  for (size_t i = 0; i < frame.size(); ++i) buf[i] = {frame[i], 0.0};
  fft_radix2(buf);
  buf.resize(frame.size() / 2 + 1);
  return buf;
}

}  // namespace seldkit::dsp
