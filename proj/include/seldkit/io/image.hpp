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

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "seldkit/common.hpp"

namespace seldkit::io {

// 8-bit RGB image, row-major, interleaved (HWC).
struct Image {
  int height = 0;
  int width = 0;
  std::vector<uint8_t> rgb;  // height * width * 3

  Image() = default;
  Image(int h, int w, uint8_t fill = 0)
      : height(h), width(w), rgb(static_cast<size_t>(h) * w * 3, fill) {}

  uint8_t* pixel(int row, int col) {
    return rgb.data() + (static_cast<size_t>(row) * width + col) * 3;
  }
  const uint8_t* pixel(int row, int col) const {
    return rgb.data() + (static_cast<size_t>(row) * width + col) * 3;
  }
  bool operator==(const Image& o) const {
    return height == o.height && width == o.width && rgb == o.rgb;
  }
};

namespace detail {

inline uint32_t crc32_of(const uint8_t* data, size_t len, uint32_t seed = 0) {
  return static_cast<uint32_t>(
      ::crc32(seed, reinterpret_cast<const Bytef*>(data), static_cast<uInt>(len)));
}

inline void put_be32(std::vector<uint8_t>& v, uint32_t x) {
  v.push_back(static_cast<uint8_t>(x >> 24));
  v.push_back(static_cast<uint8_t>(x >> 16));
  v.push_back(static_cast<uint8_t>(x >> 8));
  v.push_back(static_cast<uint8_t>(x));
}

inline uint32_t get_be32(const uint8_t* p) {
  return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) |
         uint32_t(p[3]);
}

inline void write_chunk(std::ofstream& out, const char type[4],
                        const std::vector<uint8_t>& payload) {
  std::vector<uint8_t> head;
  put_be32(head, static_cast<uint32_t>(payload.size()));
  out.write(reinterpret_cast<const char*>(head.data()), 4);
  std::vector<uint8_t> body(type, type + 4);
  body.insert(body.end(), payload.begin(), payload.end());
  const uint32_t crc = crc32_of(body.data(), body.size());
  out.write(reinterpret_cast<const char*>(body.data()),
            static_cast<std::streamsize>(body.size()));
  std::vector<uint8_t> tail;
  put_be32(tail, crc);
  out.write(reinterpret_cast<const char*>(tail.data()), 4);
}

inline std::vector<uint8_t> zlib_deflate(const std::vector<uint8_t>& in) {
  uLongf bound = compressBound(static_cast<uLong>(in.size()));
  std::vector<uint8_t> out(bound);
  if (compress2(out.data(), &bound, in.data(), static_cast<uLong>(in.size()), 6) != Z_OK)
    throw IoError("png: deflate failed");
  out.resize(bound);
  return out;
}

inline std::vector<uint8_t> zlib_inflate(const std::vector<uint8_t>& in,
                                         size_t expected) {
  std::vector<uint8_t> out(expected);
  uLongf got = static_cast<uLongf>(expected);
  if (uncompress(out.data(), &got, in.data(), static_cast<uLong>(in.size())) != Z_OK ||
      got != expected)
    throw IoError("png: inflate failed");
  return out;
}

}  // namespace detail

// Minimal PNG writer: 8-bit RGB, non-interlaced, filter 0 on every scanline.
inline void write_png(const std::string& path, const Image& img) {
  if (img.height <= 0 || img.width <= 0 ||
      img.rgb.size() != static_cast<size_t>(img.height) * img.width * 3)
    throw InputError("write_png: malformed image");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("png: cannot write " + path);
  static const uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  out.write(reinterpret_cast<const char*>(sig), 8);

  std::vector<uint8_t> ihdr;
  detail::put_be32(ihdr, static_cast<uint32_t>(img.width));
  detail::put_be32(ihdr, static_cast<uint32_t>(img.height));
  ihdr.push_back(8);   // bit depth
  ihdr.push_back(2);   // color type: truecolor
  ihdr.push_back(0);   // compression
  ihdr.push_back(0);   // filter method
  ihdr.push_back(0);   // not interlaced
  detail::write_chunk(out, "IHDR", ihdr);

  const size_t stride = static_cast<size_t>(img.width) * 3;
  std::vector<uint8_t> raw;
  raw.reserve((stride + 1) * static_cast<size_t>(img.height));
  for (int r = 0; r < img.height; ++r) {
    raw.push_back(0);  // filter type 0 (none)
    const uint8_t* row = img.rgb.data() + static_cast<size_t>(r) * stride;
    raw.insert(raw.end(), row, row + stride);
  }
  detail::write_chunk(out, "IDAT", detail::zlib_deflate(raw));
  detail::write_chunk(out, "IEND", {});
  if (!out) throw IoError("png: write failed for " + path);
}

// Minimal PNG reader for the subset this project produces plus standard
// per-scanline filters: 8-bit RGB or RGBA, non-interlaced.
inline Image read_png(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("png: cannot open " + path);
  std::vector<uint8_t> file((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  static const uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  if (file.size() < 8 || std::memcmp(file.data(), sig, 8) != 0)
    throw IoError("png: bad signature in " + path);

  size_t pos = 8;
  uint32_t w = 0, h = 0;
  int channels = 0;
  std::vector<uint8_t> idat;
  while (pos + 8 <= file.size()) {
    const uint32_t len = detail::get_be32(&file[pos]);
    const char* type = reinterpret_cast<const char*>(&file[pos + 4]);
    if (pos + 12 + len > file.size()) throw IoError("png: truncated chunk in " + path);
    const uint8_t* payload = &file[pos + 8];
    if (std::memcmp(type, "IHDR", 4) == 0) {
      w = detail::get_be32(payload);
      h = detail::get_be32(payload + 4);
      const int depth = payload[8], color = payload[9], interlace = payload[12];
      if (depth != 8 || (color != 2 && color != 6) || interlace != 0)
        throw InputError("png: unsupported format (need 8-bit RGB/RGBA): " + path);
      channels = color == 2 ? 3 : 4;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), payload, payload + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      break;
    }
    pos += 12 + len;
  }
  if (w == 0 || h == 0 || idat.empty()) throw IoError("png: missing IHDR/IDAT in " + path);

  const size_t stride = static_cast<size_t>(w) * channels;
  std::vector<uint8_t> raw = detail::zlib_inflate(idat, (stride + 1) * h);

  // undo per-scanline filters
  std::vector<uint8_t> prior(stride, 0);
  Image img(static_cast<int>(h), static_cast<int>(w));
  std::vector<uint8_t> line(stride);
  for (uint32_t r = 0; r < h; ++r) {
    const uint8_t filter = raw[r * (stride + 1)];
    const uint8_t* src = &raw[r * (stride + 1) + 1];
    for (size_t i = 0; i < stride; ++i) {
      const int a = i >= static_cast<size_t>(channels) ? line[i - channels] : 0;
      const int b = prior[i];
      const int c = i >= static_cast<size_t>(channels) ? prior[i - channels] : 0;
      int v = src[i];
      switch (filter) {
        case 0: break;
        case 1: v += a; break;
        case 2: v += b; break;
        case 3: v += (a + b) / 2; break;
        case 4: {
          const int p = a + b - c;
          const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
          v += (pa <= pb && pa <= pc) ? a : (pb <= pc ? b : c);
          break;
        }
        default: throw IoError("png: unknown filter in " + path);
      }
      line[i] = static_cast<uint8_t>(v & 0xFF);
    }
    for (uint32_t col = 0; col < w; ++col)
      std::memcpy(img.pixel(static_cast<int>(r), static_cast<int>(col)),
                  &line[col * channels], 3);
    prior = line;
  }
  return img;
}

// Raw RGB24 plane with a text sidecar holding "height width".
inline void write_rgb24(const std::string& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("rgb24: cannot write " + path);
  out.write(reinterpret_cast<const char*>(img.rgb.data()),
            static_cast<std::streamsize>(img.rgb.size()));
  std::ofstream dims(path + ".dims");
  dims << img.height << " " << img.width << "\n";
  if (!out || !dims) throw IoError("rgb24: write failed for " + path);
}

inline Image read_rgb24(const std::string& path) {
  std::ifstream dims(path + ".dims");
  int h = 0, w = 0;
  if (!(dims >> h >> w) || h <= 0 || w <= 0)
    throw IoError("rgb24: missing or malformed sidecar " + path + ".dims");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("rgb24: cannot open " + path);
  Image img(h, w);
  in.read(reinterpret_cast<char*>(img.rgb.data()),
          static_cast<std::streamsize>(img.rgb.size()));
  if (!in) throw IoError("rgb24: truncated plane " + path);
  return img;
}

}  // namespace seldkit::io
