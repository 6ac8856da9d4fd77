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

#include "mbf/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mbf/errors.hpp"
#include "mbf/fractional_delay.hpp"
#include "mbf/rng.hpp"

namespace mbf {

const char* to_string(PathKind kind) {
  switch (kind) {
    case PathKind::direct: return "direct";
    case PathKind::surface_bounce: return "surface";
    case PathKind::bottom_bounce: return "bottom";
  }
  return "?";
}

void Environment::validate() const {
  if (!(bottom_depth > 0.0)) throw DomainError("environment: bottom_depth must be positive");
  if (sos_profile.empty()) throw DomainError("environment: sound-speed profile is empty");
  for (std::size_t i = 0; i < sos_profile.size(); ++i) {
    if (!(sos_profile[i].speed > 0.0))
      throw DomainError("environment: sound speeds must be positive");
    if (i > 0 && !(sos_profile[i].depth > sos_profile[i - 1].depth))
      throw DomainError("environment: profile depths must be increasing");
  }
}

double Environment::speed_at(double depth) const {
  const auto& p = sos_profile;
  if (depth <= p.front().depth) return p.front().speed;
  if (depth >= p.back().depth) return p.back().speed;
  const auto hi = std::upper_bound(p.begin(), p.end(), depth,
                                   [](double z, const SosBreakpoint& b) { return z < b.depth; });
  const auto lo = hi - 1;
  const double t = (depth - lo->depth) / (hi->depth - lo->depth);
  return lo->speed + t * (hi->speed - lo->speed);
}

namespace {

void check_in_water(const Environment& env, double z, const char* what) {
  if (!(z >= 0.0 && z <= env.bottom_depth)) {
    std::ostringstream os;
    os << what << ": depth " << z << " m outside water column [0, " << env.bottom_depth << "]";
    throw DomainError(os.str());
  }
}

// Integral of the piecewise-linear profile from lo to hi (lo <= hi).
double profile_integral(const Environment& env, double lo, double hi) {
  std::vector<double> knots{lo};
  for (const auto& b : env.sos_profile)
    if (b.depth > lo && b.depth < hi) knots.push_back(b.depth);
  knots.push_back(hi);
  double acc = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i)
    acc += 0.5 * (knots[i] - knots[i - 1]) * (env.speed_at(knots[i]) + env.speed_at(knots[i - 1]));
  return acc;
}

double distance(const Position& a, const Position& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Speed along a path a -> boundary at depth zb -> b; each segment's share of the
// unfolded length equals its share of the traversed depth.
double bounce_speed(const Environment& env, double za, double zb, double z) {
  const double span_a = std::abs(zb - za);
  const double span_b = std::abs(zb - z);
  if (span_a + span_b == 0.0) return env.speed_at(zb);
  return (span_a * depth_averaged_sos(env, za, zb) + span_b * depth_averaged_sos(env, zb, z)) /
         (span_a + span_b);
}

}  // namespace

double depth_averaged_sos(const Environment& env, double z1, double z2) {
  check_in_water(env, z1, "depth_averaged_sos");
  check_in_water(env, z2, "depth_averaged_sos");
  const double lo = std::min(z1, z2);
  const double hi = std::max(z1, z2);
  if (hi == lo) return env.speed_at(lo);
  return profile_integral(env, lo, hi) / (hi - lo);
}

std::array<LegPath, 3> enumerate_legs(const Position& a, const Position& b, const Environment& env) {
  check_in_water(env, a.z, "enumerate_paths");
  check_in_water(env, b.z, "enumerate_paths");

  std::array<LegPath, 3> legs;

  LegPath& direct = legs[0];
  direct.kind = PathKind::direct;
  direct.length = distance(a, b);
  if (!(direct.length > 0.0)) throw DomainError("enumerate_paths: zero-length propagation path");
  direct.speed = depth_averaged_sos(env, a.z, b.z);
  direct.amplitude = 1.0 / direct.length;

  LegPath& surface = legs[1];
  surface.kind = PathKind::surface_bounce;
  surface.length = distance(a, Position{b.x, b.y, -b.z});
  surface.speed = bounce_speed(env, a.z, 0.0, b.z);
  surface.amplitude = env.surface_reflection / surface.length;

  LegPath& bottom = legs[2];
  bottom.kind = PathKind::bottom_bounce;
  bottom.length = distance(a, Position{b.x, b.y, 2.0 * env.bottom_depth - b.z});
  bottom.speed = bounce_speed(env, a.z, env.bottom_depth, b.z);
  bottom.amplitude = env.bottom_reflection / bottom.length;

  for (auto& leg : legs) {
    if (!(leg.length > 0.0)) throw DomainError("enumerate_paths: zero-length propagation path");
    leg.delay = leg.length / leg.speed;
  }
  return legs;
}

Position target_position(const Target& target, const ArrayGeometry& geom) {
  const double dz = target.depth - geom.array_depth;
  const double h2 = target.range * target.range - dz * dz;
  if (h2 < 0.0) throw DomainError("target: slant range shorter than depth offset from the array");
  return {target.x, std::sqrt(h2), target.depth};
}

Position sensor_position(const ArrayGeometry& geom, std::size_t n) {
  return {geom.sensor_x.at(n), 0.0, geom.array_depth};
}

Position source_position(const ArrayGeometry& geom) {
  return {geom.source_x, 0.0, geom.source_depth};
}

std::vector<PathArrival> enumerate_paths(const Position& tx, const Target& target,
                                         const Position& rx, const Environment& env,
                                         const ArrayGeometry& geom) {
  const Position tp = target_position(target, geom);
  const auto out_legs = enumerate_legs(tx, tp, env);
  const auto back_legs = enumerate_legs(tp, rx, env);
  std::vector<PathArrival> arrivals;
  arrivals.reserve(9);
  for (const auto& o : out_legs) {
    for (const auto& b : back_legs) {
      arrivals.push_back({o.kind, b.kind, o.delay + b.delay,
                          target.reflectivity * o.amplitude * b.amplitude});
    }
  }
  return arrivals;
}

std::vector<double> lfm_pulse_samples(const LfmPulse& pulse, double fs) {
  pulse.validate();
  if (!(fs > 2.0 * pulse.stop_frequency()))
    throw DomainError("lfm_pulse_samples: sample rate below Nyquist for the pulse band");
  const auto n = static_cast<std::size_t>(std::llround(pulse.duration * fs));
  std::vector<double> s(n);
  const double f0 = pulse.start_frequency();
  const double k = pulse.chirp_rate();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = double(i) / fs;
    s[i] = std::cos(kTwoPi * (f0 * t + 0.5 * k * t * t));
  }
  return s;
}

void SimConfig::validate(const LfmPulse& pulse) const {
  if (!(sample_rate > 2.0 * pulse.stop_frequency()))
    throw DomainError("simulation: sample_rate must exceed twice the highest pulse frequency");
  if (!(record_duration > 0.0)) throw DomainError("simulation: record_duration must be positive");
}

std::size_t SimConfig::sample_count() const {
  return static_cast<std::size_t>(std::llround(record_duration * sample_rate));
}

SimResult synthesize_rx(const std::vector<Target>& targets, const ArrayGeometry& geom,
                        const LfmPulse& pulse, const Environment& env, const SimConfig& cfg) {
  geom.validate();
  pulse.validate();
  env.validate();
  cfg.validate(pulse);
  for (const auto& t : targets) check_in_water(env, t.depth, "target");
  check_in_water(env, geom.array_depth, "array");
  check_in_water(env, geom.source_depth, "source");

  const std::size_t n_sens = geom.size();
  const std::size_t n_samp = cfg.sample_count();
  const double fs = cfg.sample_rate;
  const double gain = std::pow(10.0, cfg.receiver_gain_db / 20.0);
  const double source_amp = std::pow(10.0, cfg.signal_power_db / 20.0) * gain;
  const double noise_sigma = std::pow(10.0, cfg.noise_power_db / 20.0) * gain;
  const std::vector<double> replica = lfm_pulse_samples(pulse, fs);
  const double t_end = double(n_samp) / fs;

  SimResult result;
  result.cube = RawDataCube(n_sens, n_samp, fs, 0.0);

  // Arrival paths per sensor, computed serially so warnings are ordered.
  const Position tx = source_position(geom);
  std::vector<std::vector<std::vector<PathArrival>>> paths(n_sens);
  for (std::size_t n = 0; n < n_sens; ++n) {
    const Position rx = sensor_position(geom, n);
    paths[n].reserve(targets.size());
    for (const auto& t : targets) paths[n].push_back(enumerate_paths(tx, t, rx, env, geom));
  }

  auto keep = [&](const PathArrival& a) {
    return !cfg.direct_path_only ||
           (a.tx_leg == PathKind::direct && a.rx_leg == PathKind::direct);
  };
  auto in_record = [&](const PathArrival& a) { return a.delay + pulse.duration <= t_end; };

  const std::size_t ref = n_sens / 2;
  for (std::size_t ti = 0; ti < targets.size(); ++ti) {
    for (const auto& a : paths[ref][ti]) {
      if (!keep(a)) continue;
      result.arrivals.push_back({ti, a, !in_record(a)});
    }
  }
  // One warning per target and path kind, counting the sensors affected.
  for (std::size_t ti = 0; ti < targets.size(); ++ti) {
    for (std::size_t k = 0; k < paths[0][ti].size(); ++k) {
      std::size_t count = 0;
      double first = 0.0;
      for (std::size_t n = 0; n < n_sens; ++n) {
        const PathArrival& a = paths[n][ti][k];
        if (keep(a) && !in_record(a) && count++ == 0) first = a.delay;
      }
      if (count == 0) continue;
      const PathArrival& a = paths[0][ti][k];
      std::ostringstream os;
      os << "arrival beyond record dropped: target " << ti << ", " << to_string(a.tx_leg) << "/"
         << to_string(a.rx_leg) << " at " << first << " s on " << count << " of " << n_sens << " sensors";
      result.warnings.push_back(os.str());
    }
  }

  const auto n_sens_i = static_cast<std::ptrdiff_t>(n_sens);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ni = 0; ni < n_sens_i; ++ni) {
    const auto n = static_cast<std::size_t>(ni);
    auto out = result.cube.sensor(n);
    const std::span<const double> rep(replica);
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
      for (const auto& a : paths[n][ti]) {
        if (!keep(a) || !in_record(a)) continue;
        const double amp = source_amp * a.amplitude;
        const double start = a.delay * fs;
        const auto k0 = std::max<std::ptrdiff_t>(
            0, static_cast<std::ptrdiff_t>(std::floor(start)) - FractionalDelay::kHalf);
        const auto k1 = std::min<std::ptrdiff_t>(
            static_cast<std::ptrdiff_t>(n_samp) - 1,
            static_cast<std::ptrdiff_t>(std::ceil(start)) + static_cast<std::ptrdiff_t>(rep.size()) +
                FractionalDelay::kHalf);
        for (std::ptrdiff_t k = k0; k <= k1; ++k)
          out[static_cast<std::size_t>(k)] += amp * FractionalDelay::interpolate(rep, double(k) - start);
      }
    }
    if (cfg.add_noise) {
      const CounterNormal normal(cfg.rng_seed, n);
      for (std::size_t k = 0; k < n_samp; ++k) out[k] += noise_sigma * normal(k);
    }
  }
  return result;
}

}  // namespace mbf
