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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mbf/core_model.hpp"
#include "mbf/cube.hpp"

namespace mbf {

/// Point scatterer. `range` is the slant range in the imaging plane measured
/// from the array line, so the horizontal offset is sqrt(range^2 - dz^2).
struct Target {
  double x = 0.0;
  double range = 36.0;
  double depth = 90.0;
  double reflectivity = 1.0;
};

struct SosBreakpoint {
  double depth = 0.0;  // m
  double speed = 0.0;  // m/s
};

struct Environment {
  double bottom_depth = 100.0;
  std::vector<SosBreakpoint> sos_profile{{0.0, 1523.0}, {40.0, 1521.0}, {100.0, 1518.0}};
  double surface_reflection = -1.0;
  double bottom_reflection = 0.2;

  void validate() const;
  /// Piecewise-linear profile value, held constant beyond the end breakpoints.
  double speed_at(double depth) const;
};

/// 3-D position: x along the array, y horizontal range, z depth (positive down).
struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

enum class PathKind { direct, surface_bounce, bottom_bounce };

const char* to_string(PathKind kind);

/// One propagation leg between two points.
struct LegPath {
  PathKind kind = PathKind::direct;
  double length = 0.0;     // m
  double speed = 0.0;      // depth-averaged along the leg, m/s
  double delay = 0.0;      // s
  double amplitude = 0.0;  // boundary coefficient / length
};

/// Round-trip arrival: transmit leg followed by receive leg.
struct PathArrival {
  PathKind tx_leg = PathKind::direct;
  PathKind rx_leg = PathKind::direct;
  double delay = 0.0;
  double amplitude = 0.0;  // reflectivity * tx amplitude * rx amplitude
};

struct SimConfig {
  double sample_rate = 500e3;
  double record_duration = 0.3;
  double noise_power_db = 80.0;    // dB re 1 uPa
  double signal_power_db = 190.0;  // dB re 1 uPa at 1 m
  // Absolute receiver calibration; scales signal and noise alike.
  double receiver_gain_db = 44.0;
  std::uint64_t rng_seed = 1;
  bool add_noise = true;
  bool direct_path_only = false;

  void validate(const LfmPulse& pulse) const;
  std::size_t sample_count() const;
};

/// Arrival seen at the reference (centre) sensor, for reporting.
struct ArrivalRecord {
  std::size_t target = 0;
  PathArrival arrival;
  bool dropped = false;
};

struct SimResult {
  RawDataCube cube;
  std::vector<ArrivalRecord> arrivals;
  std::vector<std::string> warnings;
};

/// Mean of the sound-speed profile over the depth interval between z1 and z2.
double depth_averaged_sos(const Environment& env, double z1, double z2);

/// Direct, surface-bounce and bottom-bounce legs from `a` to `b` (image-source method).
std::array<LegPath, 3> enumerate_legs(const Position& a, const Position& b, const Environment& env);

/// All nine round-trip arrivals (3 transmit legs x 3 receive legs).
std::vector<PathArrival> enumerate_paths(const Position& tx, const Target& target,
                                         const Position& rx, const Environment& env,
                                         const ArrayGeometry& geom);

Position target_position(const Target& target, const ArrayGeometry& geom);
Position sensor_position(const ArrayGeometry& geom, std::size_t n);
Position source_position(const ArrayGeometry& geom);

/// Real LFM chirp sampled at fs, unit peak amplitude, round(duration * fs) samples.
std::vector<double> lfm_pulse_samples(const LfmPulse& pulse, double fs);

SimResult synthesize_rx(const std::vector<Target>& targets, const ArrayGeometry& geom,
                        const LfmPulse& pulse, const Environment& env, const SimConfig& cfg);

}  // namespace mbf
