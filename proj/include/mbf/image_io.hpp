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
#include <map>
#include <string>

#include "mbf/beamform.hpp"
#include "mbf/metrics.hpp"

namespace mbf {

/// dB image plus the key=value pairs from its header line.
struct LabelledDbImage {
  DbImage image;
  std::map<std::string, std::string> labels;  // always includes "method"
};

/// CSV: one header line
///   # mbf-image method=<m> [key=value ...] x_min=.. x_max=.. y_min=.. y_max=.. n_x=.. n_y=..
/// then n_y rows (range) of n_x comma-separated dB values (azimuth), full precision.
void write_image_csv(const std::filesystem::path& path, const DbImage& img,
                     const std::map<std::string, std::string>& labels);
LabelledDbImage read_image_csv(const std::filesystem::path& path);

/// Binary 8-bit PGM, dB clipped to [-dynamic_range_db, 0] and mapped to 0..255.
/// The first image row is the smallest range.
void write_image_pgm(const std::filesystem::path& path, const DbImage& img, double dynamic_range_db = 60.0);

/// JSON flag report: counts per flag plus the list of flagged pixels.
void write_flag_report(const std::filesystem::path& path, const Image& img);

}  // namespace mbf
