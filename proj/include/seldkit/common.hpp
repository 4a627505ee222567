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

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace seldkit {

// Error taxonomy. InputError and its subclasses map to CLI exit code 1,
// everything else to exit code 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& msg) : Error(msg) {}
};

class ShapeError : public InputError {
 public:
  explicit ShapeError(const std::string& msg) : InputError(msg) {}
};

class ConfigError : public InputError {
 public:
  explicit ConfigError(const std::string& msg) : InputError(msg) {}
};

// Raised when more same-class events are active in a frame than tracks exist.
class CapacityError : public InputError {
 public:
  CapacityError(const std::string& msg, int frame, int class_id)
      : InputError(msg), frame(frame), class_id(class_id) {}
  int frame;
  int class_id;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

class OptimError : public Error {
 public:
  explicit OptimError(const std::string& msg) : Error(msg) {}
};

class EvalError : public Error {
 public:
  explicit EvalError(const std::string& msg) : Error(msg) {}
};

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

// Wraps an azimuth into [-180, 180).
inline double wrap_azimuth(double deg) {
  double a = std::fmod(deg + 180.0, 360.0);
  if (a < 0) a += 360.0;
  return a - 180.0;
}

struct Vec3 {
  double x = 0, y = 0, z = 0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  Vec3 normalized() const {
    double n = norm();
    if (n == 0) return {0, 0, 0};
    return {x / n, y / n, z / n};
  }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
};

// Unit direction for (azimuth, elevation) in degrees. Azimuth is measured
// counterclockwise from +x (front), elevation up from the horizontal plane.
inline Vec3 doa_to_unit(double az_deg, double el_deg) {
  double az = deg2rad(az_deg), el = deg2rad(el_deg);
  return {std::cos(az) * std::cos(el), std::sin(az) * std::cos(el),
          std::sin(el)};
}

struct AzEl {
  double azimuth = 0;   // degrees, [-180, 180)
  double elevation = 0; // degrees, [-90, 90]
};

inline AzEl unit_to_doa(const Vec3& v) {
  Vec3 u = v.normalized();
  double el = rad2deg(std::asin(std::clamp(u.z, -1.0, 1.0)));
  double az = (u.x == 0 && u.y == 0) ? 0.0 : rad2deg(std::atan2(u.y, u.x));
  return {wrap_azimuth(az), el};
}

// Great-circle distance in degrees between two directions given in degrees.
// atan2 form, stable for near-parallel and near-antipodal pairs.
inline double great_circle_deg(const Vec3& a, const Vec3& b) {
  Vec3 ua = a.normalized(), ub = b.normalized();
  double c = ua.cross(ub).norm();
  double d = ua.dot(ub);
  return rad2deg(std::atan2(c, d));
}

inline double great_circle_deg(double az1, double el1, double az2, double el2) {
  return great_circle_deg(doa_to_unit(az1, el1), doa_to_unit(az2, el2));
}

// Seeded RNG used everywhere randomness is needed; determinism per seed is a
// contract (within one build of the library).
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : gen_(seed) {}

  double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(gen_);
  }
  double normal(double mean = 0.0, double stddev = 1.0) {
    std::normal_distribution<double> d(mean, stddev);
    return d(gen_);
  }
  int64_t uniform_int(int64_t lo, int64_t hi) {  // inclusive bounds
    std::uniform_int_distribution<int64_t> d(lo, hi);
    return d(gen_);
  }
  bool bernoulli(double p) {
    std::bernoulli_distribution d(p);
    return d(gen_);
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace seldkit
