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

#include <cstdint>
#include <filesystem>

#include "mbf/cube.hpp"

namespace mbf {

/// Binary cube file layout (all fields little-endian, 64-byte header):
///
///   off  size  field
///     0     8  magic "MBFCUBE\0"
///     8     4  version (1)
///    12     4  format tag (1 = real float32, 2 = complex float32 interleaved)
///    16     4  n_sensors
///    20     4  decimation (1 for raw data)
///    24     8  n_samples per sensor
///    32     8  sample_rate, Hz (float64)
///    40     8  carrier, Hz (float64, 0 for raw data)
///    48     8  time_origin, s (float64)
///    56     8  reserved (zero)
///
/// Samples follow sensor-major.
enum class CubeFormat : std::uint32_t { real_f32 = 1, complex_f32 = 2 };

struct CubeHeader {
  CubeFormat format = CubeFormat::real_f32;
  std::uint32_t n_sensors = 0;
  std::uint32_t decimation = 1;
  std::uint64_t n_samples = 0;
  double sample_rate = 0.0;
  double carrier = 0.0;
  double time_origin = 0.0;
};

inline constexpr std::size_t kCubeHeaderBytes = 64;

CubeHeader read_cube_header(const std::filesystem::path& path);

void write_raw_cube(const std::filesystem::path& path, const RawDataCube& cube);
RawDataCube read_raw_cube(const std::filesystem::path& path);

void write_baseband_cube(const std::filesystem::path& path, const BasebandCube& cube);
BasebandCube read_baseband_cube(const std::filesystem::path& path);

/// One row per sample: sample index, time, then one column per sensor.
void write_raw_cube_csv(const std::filesystem::path& path, const RawDataCube& cube);

}  // namespace mbf
