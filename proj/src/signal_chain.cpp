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

#include "mbf/signal_chain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mbf/errors.hpp"
#include "mbf/simulator.hpp"

namespace mbf {

const char* to_string(TvgVariant v) {
  return v == TvgVariant::two_way ? "two_way" : "pi_tc";
}

TvgVariant parse_tvg_variant(const std::string& s) {
  if (s == "two_way") return TvgVariant::two_way;
  if (s == "pi_tc") return TvgVariant::pi_tc;
  throw DomainError("unknown TVG variant '" + s + "' (expected two_way or pi_tc)");
}

RawDataCube quantize(const RawDataCube& cube, int bits) {
  double full_scale = 0.0;
  for (double v : cube.samples) full_scale = std::max(full_scale, std::abs(v));
  return quantize(cube, bits, full_scale);
}

RawDataCube quantize(const RawDataCube& cube, int bits, double full_scale) {
  if (bits < 2 || bits > 24) throw DomainError("quantize: bits must lie in [2, 24]");
  if (full_scale == 0.0) return cube;
  if (!(full_scale > 0.0)) throw DomainError("quantize: full scale must be positive");
  const double half_levels = std::ldexp(1.0, bits - 1);
  const double step = full_scale / half_levels;
  RawDataCube out = cube;
  for (double& v : out.samples) {
    const double code = std::clamp(std::round(v / step), -half_levels, half_levels - 1.0);
    v = code * step;
  }
  return out;
}

double tvg_range(double t, double c, TvgVariant variant) {
  return variant == TvgVariant::two_way ? 0.5 * c * t : kPi * t * c;
}

RawDataCube tvg(const RawDataCube& cube, double c, TvgVariant variant, double t_min) {
  if (!(c > 0.0)) throw DomainError("tvg: speed must be positive");
  RawDataCube out = cube;
  std::vector<double> gain(cube.n_samples);
  for (std::size_t k = 0; k < cube.n_samples; ++k)
    gain[k] = tvg_range(std::max(cube.time_at(k), t_min), c, variant);
  for (std::size_t n = 0; n < cube.n_sensors; ++n) {
    auto s = out.sensor(n);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] *= gain[k];
  }
  return out;
}

std::vector<double> lowpass_taps(std::size_t n_taps, double cutoff_hz, double fs) {
  if (n_taps < 2) throw DomainError("lowpass_taps: need at least two taps");
  const double fc = cutoff_hz / fs;
  const double mid = 0.5 * double(n_taps - 1);
  std::vector<double> h(n_taps);
  double sum = 0.0;
  for (std::size_t i = 0; i < n_taps; ++i) {
    const double d = double(i) - mid;
    const double sinc = d == 0.0 ? 2.0 * fc : std::sin(kTwoPi * fc * d) / (kPi * d);
    const double hamming = 0.54 - 0.46 * std::cos(kTwoPi * double(i) / double(n_taps - 1));
    h[i] = sinc * hamming;
    sum += h[i];
  }
  for (double& v : h) v /= sum;
  return h;
}

double demod_cutoff(double fs, std::size_t decim) { return fs / (4.0 * double(decim)); }

BasebandCube demodulate(const RawDataCube& cube, double carrier, std::size_t decim) {
  if (decim < 1) throw DomainError("demodulate: decimation must be >= 1");
  if (!(carrier >= 0.0 && carrier < 0.5 * cube.sample_rate))
    throw DomainError("demodulate: carrier must lie below the Nyquist frequency");
  if (cube.n_samples < kDemodTaps)
    throw DomainError("demodulate: low-pass filter longer than the record");

  const double fs = cube.sample_rate;
  const auto h = lowpass_taps(kDemodTaps, demod_cutoff(fs, decim), fs);
  const std::size_t n_in = cube.n_samples;
  const std::size_t n_out = (n_in + decim - 1) / decim;

  std::vector<cdouble> mixer(n_in);
  for (std::size_t k = 0; k < n_in; ++k) mixer[k] = 2.0 * std::polar(1.0, -kTwoPi * carrier * cube.time_at(k));

  BasebandCube out(cube.n_sensors, n_out, fs / double(decim), carrier, cube.time_origin + 0.5 / fs,
                   decim);
  const auto half = static_cast<std::ptrdiff_t>(kDemodTaps / 2);
  const auto taps = static_cast<std::ptrdiff_t>(kDemodTaps);
  const auto n_in_i = static_cast<std::ptrdiff_t>(n_in);
  const auto n_sens = static_cast<std::ptrdiff_t>(cube.n_sensors);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ni = 0; ni < n_sens; ++ni) {
    const auto n = static_cast<std::size_t>(ni);
    const auto x = cube.sensor(n);
    auto y = out.sensor(n);
    for (std::size_t m = 0; m < n_out; ++m) {
      // Output m is centred half a raw sample after input index m * decim.
      const auto k = static_cast<std::ptrdiff_t>(m * decim);
      cdouble acc{};
      for (std::ptrdiff_t i = 0; i < taps; ++i) {
        const std::ptrdiff_t j = k + half - i;
        if (j < 0 || j >= n_in_i) continue;
        const auto ju = static_cast<std::size_t>(j);
        acc += (h[static_cast<std::size_t>(i)] * x[ju]) * mixer[ju];
      }
      y[m] = acc;
    }
  }
  return out;
}

BasebandReplica baseband_replica(const LfmPulse& pulse, double raw_rate, double carrier,
                                 std::size_t decim) {
  const auto pulse_samples = lfm_pulse_samples(pulse, raw_rate);
  // Pad by at least half the filter length so the filter's precursor is kept.
  const std::size_t pad = decim * ((kDemodTaps / 2 + decim - 1) / decim);
  RawDataCube raw(1, pad + pulse_samples.size() + pad, raw_rate, -double(pad) / raw_rate);
  std::copy(pulse_samples.begin(), pulse_samples.end(), raw.samples.begin() + static_cast<std::ptrdiff_t>(pad));
  const BasebandCube bb = demodulate(raw, carrier, decim);
  return {bb.samples, bb.time_origin, bb.sample_rate, pad / decim};
}

BasebandCube matched_filter(const BasebandCube& cube, const LfmPulse& pulse) {
  const std::size_t decim = cube.decimation;
  const double raw_rate = cube.sample_rate * double(decim);
  const BasebandReplica rep = baseband_replica(pulse, raw_rate, cube.carrier, decim);
  if (rep.samples.size() > cube.n_samples)
    throw DomainError("matched_filter: replica longer than the data");

  // Replica time origin sits `lead` baseband samples before the pulse start,
  // plus the same half-raw-sample filter offset the data carries.
  const double replica_offset = rep.time_origin + double(rep.lead) / cube.sample_rate;
  BasebandCube out(cube.n_sensors, cube.n_samples, cube.sample_rate, cube.carrier,
                   cube.time_origin - replica_offset, decim);

  const auto n_samp = static_cast<std::ptrdiff_t>(cube.n_samples);
  const auto lead = static_cast<std::ptrdiff_t>(rep.lead);
  const auto n_rep = static_cast<std::ptrdiff_t>(rep.samples.size());
  std::vector<cdouble> conj_rep(rep.samples.size());
  std::transform(rep.samples.begin(), rep.samples.end(), conj_rep.begin(),
                 [](cdouble z) { return std::conj(z); });
  const auto n_sens = static_cast<std::ptrdiff_t>(cube.n_sensors);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ni = 0; ni < n_sens; ++ni) {
    const auto n = static_cast<std::size_t>(ni);
    const auto x = cube.sensor(n);
    auto y = out.sensor(n);
    for (std::ptrdiff_t m = 0; m < n_samp; ++m) {
      cdouble acc{};
      const std::ptrdiff_t base = m - lead;
      const std::ptrdiff_t k0 = std::max<std::ptrdiff_t>(0, -base);
      const std::ptrdiff_t k1 = std::min<std::ptrdiff_t>(n_rep, n_samp - base);
      for (std::ptrdiff_t k = k0; k < k1; ++k)
        acc += conj_rep[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(base + k)];
      y[static_cast<std::size_t>(m)] = acc;
    }
  }
  return out;
}

BasebandCube run_chain(const RawDataCube& raw, const LfmPulse& pulse, const ChainConfig& cfg) {
  RawDataCube stage = cfg.quantize ? quantize(raw, cfg.bits) : raw;
  if (cfg.apply_tvg) stage = tvg(stage, cfg.tvg_speed, cfg.tvg_variant, pulse.duration);
  const BasebandCube bb = demodulate(stage, pulse.center_frequency, cfg.decimation);
  return matched_filter(bb, pulse);
}

}  // namespace mbf
