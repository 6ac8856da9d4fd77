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

#include <filesystem>
#include <string>
#include <vector>

#include "mbf/beamform.hpp"
#include "mbf/core_model.hpp"
#include "mbf/cube_io.hpp"
#include "mbf/metrics.hpp"
#include "mbf/signal_chain.hpp"
#include "mbf/simulator.hpp"

namespace mbf {

struct ArrayConfig {
  std::size_t n_sensors = 30;
  double length = 1.0;  // first to last sensor, m
  double depth = 70.0;
  double source_x = 0.0;
  double source_depth = 70.0;

  ArrayGeometry geometry() const;
};

struct MetricsConfig {
  Box target_box{-1.5, 1.5, 30.5, 33.5};
  Box artifact_box{-2.0, 2.0, 37.5, 42.0};
  FwhmConvention convention = FwhmConvention::amplitude;
  double dynamic_range_db = 60.0;
  std::size_t compare_n_quad = 32;  // second Bayes image for the RMSE check
};

/// Complete run description. Every field has a default; the defaults describe
/// the five-target cross scene.
struct RunConfig {
  ArrayConfig array;
  LfmPulse pulse;
  Environment environment;
  std::vector<Target> targets = default_cross_targets();
  SimConfig simulation;
  ChainConfig chain;
  BeamformerConfig beamformer;
  ScanGrid grid;
  MetricsConfig metrics;

  static std::vector<Target> default_cross_targets();

  /// Throws ConfigError naming the first offending field.
  void validate() const;
  BeamformerConfig beamformer_for(Method m) const;
};

/// Parse a JSON document; unknown keys and type mismatches are rejected with
/// the field path. The result is validated.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Serialise with every field present.
std::string to_json(const RunConfig& cfg);

/// Throws FormatError unless the raw cube header matches the configured
/// array size, sample rate and record length.
void check_cube_matches(const CubeHeader& h, const RunConfig& cfg);

}  // namespace mbf
