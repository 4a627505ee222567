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

#include <cstring>
#include <fstream>
#include <map>

#include <json.hpp>

#include "seldkit/nn/adam.hpp"

namespace seldkit::nn {

// Checkpoint layout: magic "SELDCKPT", u32 version, u32 param count, then per
// parameter: u32 name length, name bytes, u32 ndim, u32 dims[ndim], and the
// float32 little-endian payload. A JSON manifest with the same names/shapes
// is written alongside as <path>.json.

inline constexpr char kCkptMagic[8] = {'S', 'E', 'L', 'D', 'C', 'K', 'P', 'T'};

template <typename T>
void save_checkpoint(const std::string& path, const std::vector<ParamRef<T>>& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("checkpoint: cannot write " + path);
  out.write(kCkptMagic, 8);
  const uint32_t version = 1, count = static_cast<uint32_t>(params.size());
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&count), 4);

  nlohmann::json manifest;
  manifest["version"] = version;
  manifest["params"] = nlohmann::json::array();

  for (const auto& p : params) {
    const uint32_t nlen = static_cast<uint32_t>(p.name.size());
    out.write(reinterpret_cast<const char*>(&nlen), 4);
    out.write(p.name.data(), nlen);
    const uint32_t ndim = static_cast<uint32_t>(p.var.ndim());
    out.write(reinterpret_cast<const char*>(&ndim), 4);
    std::vector<int64_t> dims;
    for (uint32_t i = 0; i < ndim; ++i) {
      const uint32_t d = static_cast<uint32_t>(p.var.dim(static_cast<int>(i)));
      out.write(reinterpret_cast<const char*>(&d), 4);
      dims.push_back(d);
    }
    for (int64_t i = 0; i < p.var.size(); ++i) {
      const float v = static_cast<float>(p.var.value()[i]);
      out.write(reinterpret_cast<const char*>(&v), 4);
    }
    manifest["params"].push_back({{"name", p.name}, {"shape", dims}});
  }
  if (!out) throw IoError("checkpoint: write failed for " + path);

  std::ofstream mf(path + ".json");
  mf << manifest.dump(2) << "\n";
}

// Loads named parameters into the model's parameter list; every model
// parameter must be present with a matching shape.
template <typename T>
void load_checkpoint(const std::string& path, std::vector<ParamRef<T>>& params) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("checkpoint: cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kCkptMagic, 8) != 0)
    throw IoError("checkpoint: bad magic in " + path);
  uint32_t version = 0, count = 0;
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&count), 4);
  if (!in || version != 1) throw IoError("checkpoint: unsupported version in " + path);

  std::map<std::string, Array<float>> stored;
  for (uint32_t i = 0; i < count; ++i) {
    uint32_t nlen = 0;
    in.read(reinterpret_cast<char*>(&nlen), 4);
    std::string name(nlen, '\0');
    in.read(name.data(), nlen);
    uint32_t ndim = 0;
    in.read(reinterpret_cast<char*>(&ndim), 4);
    Shape shape;
    for (uint32_t d = 0; d < ndim; ++d) {
      uint32_t dim = 0;
      in.read(reinterpret_cast<char*>(&dim), 4);
      shape.push_back(dim);
    }
    Array<float> data(shape);
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(float)));
    if (!in) throw IoError("checkpoint: truncated payload in " + path);
    stored.emplace(std::move(name), std::move(data));
  }

  for (auto& p : params) {
    auto it = stored.find(p.name);
    if (it == stored.end())
      throw IoError("checkpoint: missing parameter " + p.name + " in " + path);
    if (it->second.shape() != p.var.value().shape())
      throw ShapeError("checkpoint: shape mismatch for " + p.name + ": file " +
                       shape_str(it->second.shape()) + " vs model " +
                       shape_str(p.var.value().shape()));
    for (int64_t i = 0; i < p.var.size(); ++i)
      p.var.value()[i] = static_cast<T>(it->second[i]);
  }
}

}  // namespace seldkit::nn
