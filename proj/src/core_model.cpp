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

#include "mbf/core_model.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "mbf/errors.hpp"

namespace mbf {

double ArrayGeometry::center_x() const {
  if (sensor_x.empty()) return 0.0;
  return 0.5 * (sensor_x.front() + sensor_x.back());
}

void ArrayGeometry::validate() const {
  if (sensor_x.empty()) throw DomainError("array geometry: at least one sensor is required");
  for (std::size_t n = 1; n < sensor_x.size(); ++n) {
    if (!(sensor_x[n] > sensor_x[n - 1]))
      throw DomainError("array geometry: sensor_x must be strictly increasing (index " +
                        std::to_string(n) + ")");
  }
  for (double x : sensor_x) {
    if (!std::isfinite(x)) throw DomainError("array geometry: non-finite sensor position");
  }
}

ArrayGeometry ArrayGeometry::uniform_line(std::size_t n, double length, double depth) {
  if (n == 0) throw DomainError("uniform_line: n must be >= 1");
  ArrayGeometry g;
  g.sensor_x.resize(n);
  if (n == 1) {
    g.sensor_x[0] = 0.0;
  } else {
    for (std::size_t i = 0; i < n; ++i)
      g.sensor_x[i] = -0.5 * length + length * double(i) / double(n - 1);
  }
  g.array_depth = depth;
  g.source_depth = depth;
  g.source_x = 0.0;
  return g;
}

void ScanGrid::validate() const {
  if (n_x < 1 || n_y < 1) throw DomainError("scan grid: n_x and n_y must be >= 1");
  // A single column or row may collapse to one coordinate.
  if (!(x_max > x_min || (n_x == 1 && x_max == x_min))) throw DomainError("scan grid: x_max must exceed x_min");
  if (!(y_max > y_min || (n_y == 1 && y_max == y_min))) throw DomainError("scan grid: y_max must exceed y_min");
  if (!(y_min > 0.0)) throw DomainError("scan grid: range must be positive");
}

void LfmPulse::validate() const {
  if (!(duration > 0.0)) throw DomainError("pulse: duration must be positive");
  if (!(bandwidth >= 0.0)) throw DomainError("pulse: bandwidth must be non-negative");
  if (!(bandwidth < 2.0 * center_frequency))
    throw DomainError("pulse: bandwidth must be below twice the centre frequency");
}

double round_trip_distance(const FocalPoint& p, std::size_t n, const ArrayGeometry& geom) {
  if (n >= geom.size()) throw DomainError("round_trip_time: sensor index out of range");
  const double r_tx = std::hypot(p.x - geom.source_x, p.y);
  const double r_rx = std::hypot(p.x - geom.sensor_x[n], p.y);
  return r_tx + r_rx;
}

double round_trip_time(const FocalPoint& p, double c, std::size_t n, const ArrayGeometry& geom) {
  if (!(c > 0.0)) throw DomainError("round_trip_time: speed of sound must be positive");
  return round_trip_distance(p, n, geom) / c;
}

std::vector<cdouble> steering_vector(const FocalPoint& p, double c, const ArrayGeometry& geom,
                                     double carrier) {
  std::vector<cdouble> a(geom.size());
  for (std::size_t n = 0; n < geom.size(); ++n)
    a[n] = std::polar(1.0, -carrier * round_trip_time(p, c, n, geom));
  return a;
}

std::vector<double> hann_weights(std::size_t n) {
  if (n == 0) throw DomainError("hann_weights: n must be >= 1");
  if (n == 1) return {1.0};
  if (n == 2) return {0.5, 0.5};
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k)
    w[k] = 0.5 - 0.5 * std::cos(kTwoPi * double(k) / double(n - 1));
  // Exact palindrome: the cosine is not bit-symmetric in k.
  for (std::size_t k = 0; k < n / 2; ++k) w[n - 1 - k] = w[k];
  w.front() = 0.0;
  w.back() = 0.0;
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace mbf
