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

#include <cstddef>
#include <string>
#include <vector>

#include "mbf/core_model.hpp"
#include "mbf/cube.hpp"

namespace mbf {

/// Range model behind the time-varying gain G(t) = 20 log10 r(t).
enum class TvgVariant {
  two_way,        // r = c t / 2
  pi_tc,  // r = pi t c
};

const char* to_string(TvgVariant v);
TvgVariant parse_tvg_variant(const std::string& s);

/// Mid-tread quantiser with full scale = max |sample| over the cube.
///
/// Step = full_scale / 2^(bits-1); codes span [-2^(bits-1), 2^(bits-1) - 1],
/// so the positive full-scale sample saturates one step low, as in a
/// two's-complement converter. An all-zero cube is returned unchanged.
RawDataCube quantize(const RawDataCube& cube, int bits);

/// Same quantiser with an explicit full scale.
RawDataCube quantize(const RawDataCube& cube, int bits, double full_scale);

double tvg_range(double t, double c, TvgVariant variant);

/// Multiply each sample by 10^(G(t)/20) = r(t); t is clamped to at least t_min.
RawDataCube tvg(const RawDataCube& cube, double c, TvgVariant variant, double t_min);

/// Linear-phase Hamming-windowed sinc low-pass taps, unit DC gain.
std::vector<double> lowpass_taps(std::size_t n_taps, double cutoff_hz, double fs);

inline constexpr std::size_t kDemodTaps = 64;

/// Low-pass cutoff used by `demodulate` for a given decimation.
double demod_cutoff(double fs, std::size_t decim);

/// Quadrature demodulation: mix with 2 exp(-j 2 pi fc t), low-pass, keep every
/// decim-th sample. The half-sample group delay of the even-length filter is
/// carried in the output time origin.
BasebandCube demodulate(const RawDataCube& cube, double carrier, std::size_t decim);

struct BasebandReplica {
  std::vector<cdouble> samples;
  double time_origin = 0.0;  // relative to pulse start, s
  double sample_rate = 0.0;
  std::size_t lead = 0;  // baseband samples preceding the pulse start
};

/// Transmit pulse passed through the same demodulator as the data.
BasebandReplica baseband_replica(const LfmPulse& pulse, double raw_rate, double carrier,
                                 std::size_t decim);

/// Correlate each sensor with the baseband replica. An echo whose pulse starts
/// at delay tau peaks at output index round((tau - time_origin) * fs).
BasebandCube matched_filter(const BasebandCube& cube, const LfmPulse& pulse);

struct ChainConfig {
  bool quantize = true;
  int bits = 16;
  bool apply_tvg = true;
  TvgVariant tvg_variant = TvgVariant::two_way;
  double tvg_speed = 1519.0;
  std::size_t decimation = 4;
};

/// quantize -> TVG -> demodulate -> matched filter.
BasebandCube run_chain(const RawDataCube& raw, const LfmPulse& pulse, const ChainConfig& cfg);

}  // namespace mbf
