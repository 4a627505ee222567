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

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "seldkit/common.hpp"

namespace seldkit::seld {

inline constexpr int kNumClasses = 13;
inline constexpr double kLabelHopSeconds = 0.1;  // 100 ms label frames

struct Event {
  int class_id = 0;
  int source_id = 0;
  double azimuth = 0;   // degrees, [-180, 180)
  double elevation = 0; // degrees, [-90, 90]
};

// Ground truth or predictions at 100 ms resolution: one event list per frame.
struct EventLabelSet {
  std::vector<std::vector<Event>> frames;

  int64_t num_frames() const { return static_cast<int64_t>(frames.size()); }

  void ensure_frames(int64_t n) {
    if (n > num_frames()) frames.resize(static_cast<size_t>(n));
  }

  void add(int64_t frame, const Event& e) {
    ensure_frames(frame + 1);
    frames[static_cast<size_t>(frame)].push_back(e);
  }

  int64_t total_events() const {
    int64_t n = 0;
    for (const auto& f : frames) n += static_cast<int64_t>(f.size());
    return n;
  }

  void validate(int num_classes = kNumClasses) const {
    for (size_t t = 0; t < frames.size(); ++t) {
      std::set<std::pair<int, int>> seen;
      for (const Event& e : frames[t]) {
        if (e.class_id < 0 || e.class_id >= num_classes)
          throw InputError("labels: class_id " + std::to_string(e.class_id) +
                           " out of range at frame " + std::to_string(t));
        if (e.azimuth < -180.0 || e.azimuth >= 180.0)
          throw InputError("labels: azimuth out of [-180,180) at frame " +
                           std::to_string(t));
        if (e.elevation < -90.0 || e.elevation > 90.0)
          throw InputError("labels: elevation out of [-90,90] at frame " +
                           std::to_string(t));
        if (!seen.insert({e.class_id, e.source_id}).second)
          throw InputError("labels: duplicate (class,source) pair at frame " +
                           std::to_string(t));
      }
    }
  }
};

namespace detail {

inline std::string format_angle(double v) {
  // STARSS23 files carry integer degrees; emit integers when exact, full
  // precision otherwise.
  const double r = std::round(v);
  if (std::abs(v - r) < 1e-9) {
    std::ostringstream os;
    os << static_cast<long long>(r);
    return os.str();
  }
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << v;
  return os.str();
}

}  // namespace detail

// STARSS23 layout: `frame_index,class_id,source_id,azimuth,elevation`,
// no header, frame index at 100 ms resolution.
inline void write_label_csv(const std::string& path, const EventLabelSet& labels) {
  std::ofstream out(path);
  if (!out) throw IoError("labels: cannot write " + path);
  for (size_t t = 0; t < labels.frames.size(); ++t)
    for (const Event& e : labels.frames[t])
      out << t << "," << e.class_id << "," << e.source_id << ","
          << detail::format_angle(e.azimuth) << ","
          << detail::format_angle(e.elevation) << "\n";
  if (!out) throw IoError("labels: write failed for " + path);
}

inline EventLabelSet parse_label_csv(std::istream& in, const std::string& origin) {
  EventLabelSet out;
  std::string line;
  int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 5)
      throw InputError("labels: expected 5 columns at " + origin + ":" +
                       std::to_string(lineno));
    try {
      const int64_t frame = std::stoll(fields[0]);
      Event e;
      e.class_id = std::stoi(fields[1]);
      e.source_id = std::stoi(fields[2]);
      e.azimuth = wrap_azimuth(std::stod(fields[3]));
      e.elevation = std::stod(fields[4]);
      if (frame < 0) throw InputError("labels: negative frame index");
      out.add(frame, e);
    } catch (const std::invalid_argument&) {
      throw InputError("labels: malformed row at " + origin + ":" +
                       std::to_string(lineno));
    }
  }
  return out;
}

inline EventLabelSet read_label_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("labels: cannot open " + path);
  return parse_label_csv(in, path);
}

}  // namespace seldkit::seld
