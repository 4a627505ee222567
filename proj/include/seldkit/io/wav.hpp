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

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "seldkit/common.hpp"
#include "seldkit/ndarray.hpp"

namespace seldkit::io {

// Little-endian RIFF/WAVE, PCM 16-bit or IEEE float32, interleaved.
// Returned samples are [channels x S], floats in [-1, 1] for PCM input.

struct WavData {
  Array<double> samples;  // [channels x S]
  int sample_rate = 0;
};

namespace detail {

template <typename T>
T read_le(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError("wav: truncated file");
  return v;
}

template <typename T>
void write_le(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace detail

inline WavData read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("wav: cannot open " + path);

  char tag[4];
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "RIFF", 4) != 0) throw IoError("wav: not a RIFF file: " + path);
  detail::read_le<uint32_t>(in);  // riff size
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "WAVE", 4) != 0) throw IoError("wav: not a WAVE file: " + path);

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  std::vector<char> payload;
  bool have_fmt = false, have_data = false;

  while (in && !(have_fmt && have_data)) {
    in.read(tag, 4);
    if (!in) break;
    uint32_t size = detail::read_le<uint32_t>(in);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      format = detail::read_le<uint16_t>(in);
      channels = detail::read_le<uint16_t>(in);
      rate = detail::read_le<uint32_t>(in);
      detail::read_le<uint32_t>(in);  // byte rate
      detail::read_le<uint16_t>(in);  // block align
      bits = detail::read_le<uint16_t>(in);
      if (size > 16) in.seekg(size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      payload.resize(size);
      in.read(payload.data(), size);
      if (!in) throw IoError("wav: truncated data chunk in " + path);
      have_data = true;
    } else {
      in.seekg(size + (size & 1), std::ios::cur);
    }
  }
  if (!have_fmt || !have_data) throw IoError("wav: missing fmt/data chunk in " + path);
  if (channels == 0) throw IoError("wav: zero channels in " + path);

  const bool pcm16 = format == 1 && bits == 16;
  const bool f32 = format == 3 && bits == 32;
  if (!pcm16 && !f32)
    throw InputError("wav: unsupported format (want PCM16 or float32): " + path);

  const size_t bytes_per = pcm16 ? 2 : 4;
  const int64_t frames = static_cast<int64_t>(payload.size() / (bytes_per * channels));
  WavData out;
  out.sample_rate = static_cast<int>(rate);
  out.samples = Array<double>(Shape{channels, frames});
  const char* p = payload.data();
  for (int64_t i = 0; i < frames; ++i)
    for (int c = 0; c < channels; ++c) {
      double v;
      if (pcm16) {
        int16_t s;
        std::memcpy(&s, p, 2);
        p += 2;
        v = s / 32768.0;
      } else {
        float s;
        std::memcpy(&s, p, 4);
        p += 4;
        v = s;
      }
      out.samples.at(c, i) = v;
    }
  return out;
}

// Writes IEEE float32 WAV (format tag 3); preserves sample values bit-exactly
// through a round trip at float precision.
inline void write_wav(const std::string& path, const Array<double>& samples,
                      int sample_rate) {
  if (samples.ndim() != 2) throw InputError("write_wav: samples must be [channels x S]");
  const int64_t channels = samples.dim(0), frames = samples.dim(1);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("wav: cannot write " + path);

  const uint32_t data_bytes = static_cast<uint32_t>(frames * channels * 4);
  out.write("RIFF", 4);
  detail::write_le<uint32_t>(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  detail::write_le<uint32_t>(out, 16);
  detail::write_le<uint16_t>(out, 3);  // IEEE float
  detail::write_le<uint16_t>(out, static_cast<uint16_t>(channels));
  detail::write_le<uint32_t>(out, static_cast<uint32_t>(sample_rate));
  detail::write_le<uint32_t>(out, static_cast<uint32_t>(sample_rate * channels * 4));
  detail::write_le<uint16_t>(out, static_cast<uint16_t>(channels * 4));
  detail::write_le<uint16_t>(out, 32);
  out.write("data", 4);
  detail::write_le<uint32_t>(out, data_bytes);
  for (int64_t i = 0; i < frames; ++i)
    for (int64_t c = 0; c < channels; ++c)
      detail::write_le<float>(out, static_cast<float>(samples.at(c, i)));
  if (!out) throw IoError("wav: write failed for " + path);
}

}  // namespace seldkit::io
