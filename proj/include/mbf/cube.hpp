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
#include <span>
#include <vector>

namespace mbf {

/// Real sensor time series, sensor-major.
struct RawDataCube {
  std::size_t n_sensors = 0;
  std::size_t n_samples = 0;
  double sample_rate = 0.0;  // Hz
  double time_origin = 0.0;  // time of sample 0, s
  std::vector<double> samples;

  RawDataCube() = default;
  RawDataCube(std::size_t sensors, std::size_t length, double fs, double t0 = 0.0)
      : n_sensors(sensors), n_samples(length), sample_rate(fs), time_origin(t0),
        samples(sensors * length, 0.0) {}

  std::span<double> sensor(std::size_t n) { return {samples.data() + n * n_samples, n_samples}; }
  std::span<const double> sensor(std::size_t n) const {
    return {samples.data() + n * n_samples, n_samples};
  }
  double time_at(std::size_t k) const { return time_origin + double(k) / sample_rate; }
};

/// Complex baseband series after demodulation and decimation.
struct BasebandCube {
  std::size_t n_sensors = 0;
  std::size_t n_samples = 0;
  double sample_rate = 0.0;  // Hz, post-decimation
  double carrier = 0.0;      // Hz
  double time_origin = 0.0;  // s
  std::size_t decimation = 1;
  std::vector<std::complex<double>> samples;

  BasebandCube() = default;
  BasebandCube(std::size_t sensors, std::size_t length, double fs, double fc, double t0,
               std::size_t decim)
      : n_sensors(sensors), n_samples(length), sample_rate(fs), carrier(fc), time_origin(t0),
        decimation(decim), samples(sensors * length) {}

  std::span<std::complex<double>> sensor(std::size_t n) {
    return {samples.data() + n * n_samples, n_samples};
  }
  std::span<const std::complex<double>> sensor(std::size_t n) const {
    return {samples.data() + n * n_samples, n_samples};
  }
  double time_at(std::size_t k) const { return time_origin + double(k) / sample_rate; }
};

}  // namespace mbf
