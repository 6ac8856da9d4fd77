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

#include <span>
#include <string>
#include <vector>

#include "mbf/beamform.hpp"
#include "mbf/core_model.hpp"

namespace mbf {

/// Peak-normalised dB magnitudes, same layout as Image.
struct DbImage {
  ScanGrid grid;
  std::vector<double> pixels;

  double at(std::size_t ix, std::size_t iy) const { return pixels[iy * grid.n_x + ix]; }
  std::vector<double> row(std::size_t iy) const;
};

/// Zero pixels map to this level instead of -inf.
inline constexpr double kDbFloor = -300.0;

DbImage envelope_db(const Image& img);

enum class FwhmConvention { amplitude, intensity };

const char* to_string(FwhmConvention c);
FwhmConvention parse_fwhm_convention(const std::string& s);

/// Width around the global peak at half amplitude (-6.02 dB) or half power
/// (-3.01 dB), interpolated linearly in amplitude between samples.
double fwhm(std::span<const double> profile_db, double dx,
            FwhmConvention convention = FwhmConvention::amplitude);

/// Axis-aligned region in metres; a pixel belongs when its centre lies inside.
struct Box {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  bool contains(const FocalPoint& p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
};

struct BoxPeak {
  double level_db = 0.0;
  std::size_t ix = 0;
  std::size_t iy = 0;
};

/// Maximum pixel in the box; throws DomainError when no pixel centre lies inside.
BoxPeak box_peak(const DbImage& img, const Box& box);

/// max(artifact box) - max(target box), dB.
double pmal(const DbImage& img, const Box& target_box, const Box& artifact_box);

/// FWHM of the azimuth row through the target-box peak, metres.
double fwhm_in_box(const DbImage& img, const Box& target_box,
                   FwhmConvention convention = FwhmConvention::amplitude);

inline constexpr double kRmseFloorDb = -120.0;

/// 20 log10(RMS(|a| - |b|) / peak) on linear magnitudes, floored at -120 dB.
double rmse_db(const DbImage& a, const DbImage& b);

struct MethodMetrics {
  std::string method;
  std::string image;
  double fwhm_m = 0.0;  // NaN when undefined, written as null
  double pmal_db = 0.0;
};

struct RmsePair {
  std::string a;
  std::string b;
  double value = 0.0;
};

struct MetricsReport {
  Box target_box;
  Box artifact_box;
  FwhmConvention convention = FwhmConvention::amplitude;
  std::vector<MethodMetrics> results;
  std::vector<RmsePair> rmse_db;

  std::string to_json() const;
};

}  // namespace mbf
