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
#include <fstream>
#include <string>

#include "seldkit/common.hpp"
#include "seldkit/ndarray.hpp"

namespace seldkit::io {

// Flat little-endian float32 tensor file. Header is exactly 8 bytes: four
// uint16 dimensions d0..d3 (unused trailing dimensions are 1), followed by
// d0*d1*d2*d3 float32 values, row-major.
inline void write_tensor(const std::string& path, const Array<float>& t) {
  if (t.ndim() > 4) throw InputError("write_tensor: at most 4 dimensions");
  uint16_t dims[4] = {1, 1, 1, 1};
  for (int i = 0; i < t.ndim(); ++i) {
    if (t.dim(i) > 0xFFFF) throw InputError("write_tensor: dimension exceeds uint16");
    dims[i] = static_cast<uint16_t>(t.dim(i));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("tensor: cannot write " + path);
  out.write(reinterpret_cast<const char*>(dims), 8);
  out.write(reinterpret_cast<const char*>(t.data()),
            static_cast<std::streamsize>(t.size() * sizeof(float)));
  if (!out) throw IoError("tensor: write failed for " + path);
}

inline Array<float> read_tensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("tensor: cannot open " + path);
  uint16_t dims[4];
  in.read(reinterpret_cast<char*>(dims), 8);
  if (!in) throw IoError("tensor: truncated header in " + path);
  Shape shape;
  for (int i = 0; i < 4; ++i) shape.push_back(dims[i]);
  while (shape.size() > 1 && shape.back() == 1) shape.pop_back();
  Array<float> t(shape);
  in.read(reinterpret_cast<char*>(t.data()),
          static_cast<std::streamsize>(t.size() * sizeof(float)));
  if (!in) throw IoError("tensor: truncated payload in " + path);
  return t;
}

}  // namespace seldkit::io
