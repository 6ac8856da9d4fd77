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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "mbf/errors.hpp"
#include "mbf/signal_chain.hpp"
#include "mbf/simulator.hpp"

using namespace mbf;
using Catch::Approx;

namespace {

RawDataCube tone(double f, double amplitude, std::size_t n, double fs = 500e3, double phase = 0.3) {
  RawDataCube c(1, n, fs, 0.0);
  for (std::size_t k = 0; k < n; ++k) c.samples[k] = amplitude * std::cos(kTwoPi * f * c.time_at(k) + phase);
  return c;
}

// Naive DFT magnitude at frequency f (Hz).
double dft_mag(std::span<const cdouble> x, double f, double fs) {
  cdouble acc{};
  for (std::size_t k = 0; k < x.size(); ++k) acc += x[k] * std::polar(1.0, -kTwoPi * f * double(k) / fs);
  return std::abs(acc);
}

// -3 dB width (samples) of |x| around its peak, linear interpolation in magnitude.
double width_3db(const std::vector<double>& mag) {
  const std::size_t k = static_cast<std::size_t>(std::max_element(mag.begin(), mag.end()) - mag.begin());
  const double level = mag[k] / std::sqrt(2.0);
  std::size_t l = k, r = k;
  while (l > 0 && mag[l] > level) --l;
  while (r + 1 < mag.size() && mag[r] > level) ++r;
  const double xl = double(l) + (level - mag[l]) / (mag[l + 1] - mag[l]);
  const double xr = double(r) - (level - mag[r]) / (mag[r - 1] - mag[r]);
  return xr - xl;
}

}  // namespace

TEST_CASE("quantize: mid-tread zero, half-LSB bound and 2-bit levels") {
  RawDataCube c(1, 2001, 1.0);
  for (std::size_t k = 0; k < c.n_samples; ++k) c.samples[k] = -1.0 + 2.0 * double(k) / 2000.0;
  const RawDataCube q2 = quantize(c, 2);
  std::set<double> levels(q2.samples.begin(), q2.samples.end());
  CHECK(levels.size() == 4);
  CHECK(q2.samples[1000] == 0.0);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0.0, 3.0);
  RawDataCube r(2, 4000, 1.0);
  for (double& v : r.samples) v = nd(rng);
  double fs = 0.0;
  for (double v : r.samples) fs = std::max(fs, std::abs(v));
  for (int bits : {4, 8, 16}) {
    const RawDataCube q = quantize(r, bits);
    const double step = fs / std::ldexp(1.0, bits - 1);
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
      if (r.samples[i] >= fs - step) continue;  // positive full scale saturates one code low
      CHECK(std::abs(q.samples[i] - r.samples[i]) <= fs / std::ldexp(1.0, bits) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("quantize: idempotent at a fixed full scale, zero cube unchanged") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  RawDataCube r(1, 1000, 1.0);
  for (double& v : r.samples) v = u(rng);
  const RawDataCube q = quantize(r, 6, 2.0);
  CHECK(quantize(q, 6, 2.0).samples == q.samples);
  RawDataCube z(1, 10, 1.0);
  CHECK(quantize(z, 8).samples == z.samples);
  CHECK_THROWS_AS(quantize(r, 1), DomainError);
  CHECK_THROWS_AS(quantize(r, 25), DomainError);
}

TEST_CASE("tvg: unit and 20 dB points") {
  const double c = 1500.0;
  RawDataCube x(1, 1, 1.0);
  x.samples = {3.0};
  x.time_origin = 2.0 / c;  // r = c t / 2 = 1 m
  CHECK(tvg(x, c, TvgVariant::two_way, 0.0).samples[0] == Approx(3.0));
  x.time_origin = 20.0 / c;  // r = 10 m
  CHECK(tvg(x, c, TvgVariant::two_way, 0.0).samples[0] == Approx(30.0));
  x.time_origin = 1.0 / (kPi * c);  // literal r = pi t c = 1 m
  CHECK(tvg(x, c, TvgVariant::pi_tc, 0.0).samples[0] == Approx(3.0));
  x.time_origin = 0.0;
  CHECK(tvg(x, c, TvgVariant::two_way, 1e-3).samples[0] == Approx(3.0 * 0.5 * c * 1e-3));
}

TEST_CASE("tvg: equalises spherically spread echoes at 10 m and 20 m") {
  const double fs = 500e3, c = 1500.0;
  const LfmPulse pulse;
  const auto rep = lfm_pulse_samples(pulse, fs);
  RawDataCube x(1, 20000, fs);
  for (double r : {10.0, 20.0}) {
    const auto start = static_cast<std::size_t>(std::llround(2.0 * r / c * fs));
    for (std::size_t k = 0; k < rep.size(); ++k) x.samples[start + k] += rep[k] / r;
  }
  const RawDataCube y = tvg(x, c, TvgVariant::two_way, pulse.duration);
  auto energy_db = [&](double r) {
    const auto start = static_cast<std::size_t>(std::llround(2.0 * r / c * fs));
    double e = 0.0;
    for (std::size_t k = 0; k < rep.size(); ++k) e += y.samples[start + k] * y.samples[start + k];
    return 10.0 * std::log10(e);
  };
  CHECK(std::abs(energy_db(10.0) - energy_db(20.0)) < 0.1);
}

TEST_CASE("demodulate: carrier tone maps to unit magnitude, zero to zero") {
  const double fc = 30e3;
  const RawDataCube x = tone(fc, 1.0, 5000);
  const BasebandCube bb = demodulate(x, fc, 4);
  CHECK(bb.sample_rate == Approx(125e3));
  CHECK(bb.n_samples == 1250);
  for (std::size_t m = 20; m + 20 < bb.n_samples; ++m) CHECK(std::abs(std::abs(bb.samples[m]) - 1.0) < 0.01);

  const BasebandCube z = demodulate(RawDataCube(2, 500, 500e3), fc, 4);
  for (const cdouble& v : z.samples) CHECK(v == cdouble{});
  CHECK_THROWS_AS(demodulate(RawDataCube(1, 32, 500e3), fc, 4), DomainError);
  CHECK_THROWS_AS(demodulate(x, 260e3, 4), DomainError);
}

TEST_CASE("demodulate: offset tone appears at the offset frequency, energy preserved") {
  const double fc = 30e3;
  for (double offset : {-9e3, -5e3, 5e3, 9e3}) {
    const BasebandCube bb = demodulate(tone(fc + offset, 1.0, 10000), fc, 4);
    const std::span<const cdouble> steady(bb.samples.data() + 50, 2000);
    // FFT-peak oracle on a 50 Hz grid.
    double best_f = 0.0, best = -1.0;
    for (double f = -20e3; f <= 20e3; f += 50.0) {
      const double m = dft_mag(steady, f, bb.sample_rate);
      if (m > best) {
        best = m;
        best_f = f;
      }
    }
    CHECK(best_f == Approx(offset).margin(50.0));
    double power = 0.0;
    for (const cdouble& v : steady) power += std::norm(v);
    power /= double(steady.size());
    CHECK(std::abs(power - 1.0) < 0.01);  // real tone of amplitude 1 -> |bb|^2 = 1
  }
}

TEST_CASE("lowpass_taps: unit DC gain and symmetric") {
  const auto h = lowpass_taps(64, 31.25e3, 500e3);
  double s = 0.0;
  for (double v : h) s += v;
  CHECK(s == Approx(1.0).epsilon(1e-14));
  for (std::size_t i = 0; i < 32; ++i) CHECK(h[i] == Approx(h[63 - i]).epsilon(1e-13));
  CHECK(demod_cutoff(500e3, 4) == 31.25e3);
}

TEST_CASE("matched_filter: replica against itself peaks at lag zero with its energy") {
  const LfmPulse pulse;
  const BasebandReplica rep = baseband_replica(pulse, 500e3, 30e3, 4);
  BasebandCube data(1, 400, rep.sample_rate, 30e3, rep.time_origin, 4);
  std::copy(rep.samples.begin(), rep.samples.end(), data.samples.begin());
  const BasebandCube out = matched_filter(data, pulse);
  std::size_t peak = 0;
  for (std::size_t m = 0; m < out.n_samples; ++m)
    if (std::abs(out.samples[m]) > std::abs(out.samples[peak])) peak = m;
  double energy = 0.0;
  for (const cdouble& v : rep.samples) energy += std::norm(v);
  CHECK(out.time_at(peak) == Approx(0.0).margin(1e-12));
  CHECK(std::abs(out.samples[peak]) == Approx(energy).epsilon(1e-12));

  // Shift property: delaying the data by k samples moves the peak by k.
  for (std::size_t k : {std::size_t{3}, std::size_t{17}, std::size_t{120}}) {
    BasebandCube d(1, 400, rep.sample_rate, 30e3, rep.time_origin, 4);
    std::copy(rep.samples.begin(), rep.samples.end(), d.samples.begin() + static_cast<std::ptrdiff_t>(k));
    const BasebandCube o = matched_filter(d, pulse);
    std::size_t pk = 0;
    for (std::size_t m = 0; m < o.n_samples; ++m)
      if (std::abs(o.samples[m]) > std::abs(o.samples[pk])) pk = m;
    CHECK(pk == peak + k);
  }

  BasebandCube tiny(1, 3, rep.sample_rate, 30e3, 0.0, 4);
  CHECK_THROWS_AS(matched_filter(tiny, pulse), DomainError);
}

TEST_CASE("matched_filter: main-lobe width matches a DFT pulse-compression oracle") {
  const LfmPulse pulse;
  const BasebandReplica rep = baseband_replica(pulse, 500e3, 30e3, 4);
  const std::size_t n = 512;
  BasebandCube data(1, n, rep.sample_rate, 30e3, rep.time_origin, 4);
  std::copy(rep.samples.begin(), rep.samples.end(), data.samples.begin() + 200);
  const BasebandCube out = matched_filter(data, pulse);
  std::vector<double> mag(out.n_samples);
  for (std::size_t m = 0; m < mag.size(); ++m) mag[m] = std::abs(out.samples[m]);

  // Oracle: autocorrelation as the inverse DFT of |X|^2 with 8x zero padding.
  const std::size_t nfft = 8 * 64;
  std::vector<cdouble> xk(nfft);
  for (std::size_t k = 0; k < nfft; ++k)
    for (std::size_t i = 0; i < rep.samples.size(); ++i)
      xk[k] += rep.samples[i] * std::polar(1.0, -kTwoPi * double(k * i) / double(nfft));
  std::vector<double> acf(nfft);
  for (std::size_t lag = 0; lag < nfft; ++lag) {
    cdouble acc{};
    for (std::size_t k = 0; k < nfft; ++k)
      acc += std::norm(xk[k]) * std::polar(1.0, kTwoPi * double(k * lag) / double(nfft));
    acf[(lag + nfft / 2) % nfft] = std::abs(acc);
  }
  const double oracle = width_3db(acf);
  CHECK(width_3db(mag) == Approx(oracle).margin(0.05));
  // BT = 1: the lobe lies between a triangle of base 2T (0.586 T) and a sinc (0.886 / B); T = 1/B = 6.25 samples.
  CHECK(oracle > 0.586 * 6.25);
  CHECK(oracle < 0.886 * 6.25);
}

TEST_CASE("run_chain: echo peaks at its delay, TVG leaves the peak in place, deterministic") {
  SimConfig sim;
  sim.add_noise = false;
  sim.direct_path_only = true;
  sim.record_duration = 0.06;
  const ArrayGeometry g = ArrayGeometry::uniform_line(3, 1.0, 70.0);
  const Target t{0.0, 36.0, 90.0, 1.0};
  const LfmPulse pulse;
  const auto r = synthesize_rx({t}, g, pulse, Environment{}, sim);
  ChainConfig with_tvg, without_tvg;
  without_tvg.apply_tvg = false;
  const BasebandCube a = run_chain(r.cube, pulse, with_tvg);
  const BasebandCube b = run_chain(r.cube, pulse, without_tvg);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto arr = enumerate_paths(source_position(g), t, sensor_position(g, n), Environment{}, g);
    const double tau = arr[0].delay;
    auto peak_of = [&](const BasebandCube& c) {
      const auto s = c.sensor(n);
      std::size_t pk = 0;
      for (std::size_t m = 0; m < s.size(); ++m)
        if (std::abs(s[m]) > std::abs(s[pk])) pk = m;
      return pk;
    };
    const double expected = (tau - a.time_origin) * a.sample_rate;
    CHECK(std::abs(double(peak_of(a)) - expected) <= 1.0);
    CHECK(peak_of(a) == peak_of(b));
  }
  CHECK(run_chain(r.cube, pulse, with_tvg).samples == a.samples);
}
