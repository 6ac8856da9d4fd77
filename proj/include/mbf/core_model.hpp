// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace mbf {

using cdouble = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Linear receive array plus a single transmitter, all at fixed depth.
///
/// The imaging plane is (azimuth x, slant range y); the array lies on y = 0.
/// Depths are only used by the simulator to build 3-D propagation paths.
struct ArrayGeometry {
  std::vector<double> sensor_x;  // metres, strictly increasing
  double array_depth = 70.0;
  double source_x = 0.0;
  double source_depth = 70.0;

  std::size_t size() const { return sensor_x.size(); }
  double center_x() const;
  void validate() const;

  /// Equispaced line of `n` sensors spanning `length` metres, centred on x = 0.
  static ArrayGeometry uniform_line(std::size_t n, double length, double depth);
};

struct FocalPoint {
  double x = 0.0;  // azimuth, m
  double y = 0.0;  // range, m (> 0)
};

struct ScanGrid {
  double x_min = -6.0;
  double x_max = 6.0;
  double y_min = 28.0;
  double y_max = 42.0;
  std::size_t n_x = 256;
  std::size_t n_y = 512;

  void validate() const;
  double dx() const { return n_x > 1 ? (x_max - x_min) / double(n_x - 1) : 0.0; }
  double dy() const { return n_y > 1 ? (y_max - y_min) / double(n_y - 1) : 0.0; }
  double x_at(std::size_t ix) const { return n_x > 1 ? x_min + dx() * double(ix) : 0.5 * (x_min + x_max); }
  double y_at(std::size_t iy) const { return n_y > 1 ? y_min + dy() * double(iy) : 0.5 * (y_min + y_max); }
  FocalPoint point(std::size_t ix, std::size_t iy) const { return {x_at(ix), y_at(iy)}; }
  std::size_t pixel_count() const { return n_x * n_y; }

  bool operator==(const ScanGrid&) const = default;
};

/// Linear frequency-modulated transmit pulse.
struct LfmPulse {
  double center_frequency = 30e3;  // Hz
  double bandwidth = 20e3;         // Hz
  double duration = 50e-6;         // s

  void validate() const;
  double start_frequency() const { return center_frequency - 0.5 * bandwidth; }
  double stop_frequency() const { return center_frequency + 0.5 * bandwidth; }
  double chirp_rate() const { return bandwidth / duration; }
};

/// Transmit-to-pixel plus pixel-to-sensor straight-line distance, divided by c.
double round_trip_time(const FocalPoint& p, double c, std::size_t n, const ArrayGeometry& geom);

/// Round-trip path length (metres) to sensor n; independent of the speed.
double round_trip_distance(const FocalPoint& p, std::size_t n, const ArrayGeometry& geom);

/// exp(-j * carrier * t(p, c, n)) for every sensor; `carrier` in rad/s.
std::vector<cdouble> steering_vector(const FocalPoint& p, double c, const ArrayGeometry& geom,
                                     double carrier);

/// Symmetric Hann taper normalised to unit sum. n = 1 -> [1], n = 2 -> [0.5, 0.5].
std::vector<double> hann_weights(std::size_t n);

}  // namespace mbf
