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

#include "mbf/config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "mbf/errors.hpp"

namespace mbf {

using nlohmann::json;

ArrayGeometry ArrayConfig::geometry() const {
  ArrayGeometry g = ArrayGeometry::uniform_line(n_sensors, length, depth);
  g.source_x = source_x;
  g.source_depth = source_depth;
  return g;
}

std::vector<Target> RunConfig::default_cross_targets() {
  // Plus-shaped cluster centred at 32 m slant range, 90 m depth.
  return {{0.0, 32.0, 90.0, 1.0}, {-1.0, 32.0, 90.0, 1.0}, {1.0, 32.0, 90.0, 1.0},
          {0.0, 31.0, 90.0, 1.0}, {0.0, 33.0, 90.0, 1.0}};
}

BeamformerConfig RunConfig::beamformer_for(Method m) const {
  BeamformerConfig b = beamformer;
  b.method = m;
  b.range_model = chain.tvg_variant;
  return b;
}

namespace {

// Strict object reader: tracks consumed keys so leftovers can be reported.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(field(key), "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) throw ConfigError(field(key), "must be finite");
    }
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(field(key), "expected an integer");
      if constexpr (std::is_unsigned_v<Int>) {
        if (v->is_number_unsigned() == false && v->get<long long>() < 0)
          throw ConfigError(field(key), "must be non-negative");
      }
      out = v->get<Int>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(field(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  template <class Parse>
  void choice(const std::string& key, Parse parse) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(field(key), "expected a string");
      try {
        parse(v->get<std::string>());
      } catch (const DomainError& e) {
        throw ConfigError(field(key), e.what());
      }
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(field(it.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class F>
void section(Reader& parent, const std::string& key, F body) {
  if (const json* v = parent.find(key)) {
    Reader r(*v, parent.field(key));
    body(r);
    r.finish();
  }
}

void read_box(Reader& parent, const std::string& key, Box& b) {
  section(parent, key, [&](Reader& r) {
    r.number("x_min", b.x_min);
    r.number("x_max", b.x_max);
    r.number("y_min", b.y_min);
    r.number("y_max", b.y_max);
  });
}

void require(bool ok, const std::string& path, const std::string& msg) {
  if (!ok) throw ConfigError(path, msg);
}

template <class F>
void backstop(const std::string& path, F check) {
  try {
    check();
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
}

json box_json(const Box& b) {
  return {{"x_min", b.x_min}, {"x_max", b.x_max}, {"y_min", b.y_min}, {"y_max", b.y_max}};
}

}  // namespace

void RunConfig::validate() const {
  require(array.n_sensors >= 1, "array.n_sensors", "must be at least 1");
  require(array.n_sensors == 1 || array.length > 0.0, "array.length", "must be positive");
  require(pulse.center_frequency > 0.0, "pulse.center_frequency", "must be positive");
  require(pulse.bandwidth >= 0.0, "pulse.bandwidth", "must be non-negative");
  require(pulse.bandwidth < 2.0 * pulse.center_frequency, "pulse.bandwidth",
          "must be below twice the centre frequency");
  require(pulse.duration > 0.0, "pulse.duration", "must be positive");
  require(environment.bottom_depth > 0.0, "environment.bottom_depth", "must be positive");
  require(!environment.sos_profile.empty(), "environment.sos_profile", "must not be empty");
  for (std::size_t i = 0; i < environment.sos_profile.size(); ++i) {
    const std::string p = "environment.sos_profile[" + std::to_string(i) + "]";
    require(environment.sos_profile[i].speed > 0.0, p + ".speed", "must be positive");
    if (i > 0)
      require(environment.sos_profile[i].depth > environment.sos_profile[i - 1].depth, p + ".depth",
              "depths must be increasing");
  }
  auto in_water = [&](double z, const std::string& p) {
    require(z >= 0.0 && z <= environment.bottom_depth, p, "must lie between the surface and the bottom");
  };
  in_water(array.depth, "array.depth");
  in_water(array.source_depth, "array.source_depth");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const std::string p = "targets[" + std::to_string(i) + "]";
    in_water(targets[i].depth, p + ".depth");
    require(targets[i].range > std::abs(targets[i].depth - array.depth), p + ".range",
            "slant range must exceed the depth offset from the array");
  }
  require(simulation.sample_rate > 2.0 * pulse.stop_frequency(), "simulation.sample_rate",
          "must exceed twice the highest pulse frequency");
  require(simulation.record_duration > 0.0, "simulation.record_duration", "must be positive");
  require(chain.bits >= 2 && chain.bits <= 24, "signal_chain.bits", "must lie in [2, 24]");
  require(chain.tvg_speed > 0.0, "signal_chain.tvg_speed", "must be positive");
  require(chain.decimation >= 1, "signal_chain.decimation", "must be at least 1");
  require(pulse.center_frequency < 0.5 * simulation.sample_rate, "pulse.center_frequency",
          "must lie below the Nyquist frequency");
  require(simulation.sample_count() >= kDemodTaps, "simulation.record_duration",
          "record is shorter than the demodulation filter");
  require(beamformer.c_fixed > 0.0, "beamformer.c_fixed", "must be positive");
  require(beamformer.subarray_length >= 1 && beamformer.subarray_length <= array.n_sensors,
          "beamformer.subarray_length", "must lie in [1, array.n_sensors]");
  require(beamformer.prior.mu_c > 0.0, "beamformer.mu_c", "must be positive");
  require(beamformer.prior.sigma_c >= 0.0, "beamformer.sigma_c", "must be non-negative");
  require(beamformer.n_quad >= 1 && beamformer.n_quad <= 128, "beamformer.n_quad", "must lie in [1, 128]");
  require(beamformer.dr_db > 0.0, "beamformer.dr_db", "must be positive");
  require(!beamformer.loading || *beamformer.loading >= 0.0, "beamformer.loading", "must be non-negative");
  require(grid.n_x >= 1, "grid.n_x", "must be at least 1");
  require(grid.n_y >= 1, "grid.n_y", "must be at least 1");
  require(grid.x_max > grid.x_min, "grid.x_max", "must exceed grid.x_min");
  require(grid.y_max > grid.y_min, "grid.y_max", "must exceed grid.y_min");
  require(grid.y_min > 0.0, "grid.y_min", "must be positive");
  for (const auto& [name, box] : {std::pair{"metrics.target_box", metrics.target_box},
                                  std::pair{"metrics.artifact_box", metrics.artifact_box}}) {
    require(box.x_max >= box.x_min, std::string(name) + ".x_max", "must not be below x_min");
    require(box.y_max >= box.y_min, std::string(name) + ".y_max", "must not be below y_min");
  }
  require(metrics.dynamic_range_db > 0.0, "metrics.dynamic_range_db", "must be positive");
  require(metrics.compare_n_quad >= 1 && metrics.compare_n_quad <= 128, "metrics.compare_n_quad",
          "must lie in [1, 128]");

  // Module-level checks as a backstop for anything not covered above.
  const ArrayGeometry geom = array.geometry();
  backstop("array", [&] { geom.validate(); });
  backstop("pulse", [&] { pulse.validate(); });
  backstop("environment", [&] { environment.validate(); });
  backstop("simulation", [&] { simulation.validate(pulse); });
  backstop("beamformer", [&] { beamformer.validate(geom.size()); });
  backstop("grid", [&] { grid.validate(); });
}

RunConfig parse_run_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  RunConfig c;
  Reader r(root, "");
  section(r, "array", [&](Reader& s) {
    s.integer("n_sensors", c.array.n_sensors);
    s.number("length", c.array.length);
    s.number("depth", c.array.depth);
    s.number("source_x", c.array.source_x);
    s.number("source_depth", c.array.source_depth);
  });
  section(r, "pulse", [&](Reader& s) {
    s.number("center_frequency", c.pulse.center_frequency);
    s.number("bandwidth", c.pulse.bandwidth);
    s.number("duration", c.pulse.duration);
  });
  section(r, "environment", [&](Reader& s) {
    s.number("bottom_depth", c.environment.bottom_depth);
    s.number("surface_reflection", c.environment.surface_reflection);
    s.number("bottom_reflection", c.environment.bottom_reflection);
    if (const json* v = s.find("sos_profile")) {
      if (!v->is_array()) throw ConfigError(s.field("sos_profile"), "expected an array");
      c.environment.sos_profile.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        Reader e((*v)[i], s.field("sos_profile") + "[" + std::to_string(i) + "]");
        SosBreakpoint b;
        e.number("depth", b.depth);
        e.number("speed", b.speed);
        e.finish();
        c.environment.sos_profile.push_back(b);
      }
    }
  });
  if (const json* v = r.find("targets")) {
    if (!v->is_array()) throw ConfigError("targets", "expected an array");
    c.targets.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      Reader t((*v)[i], "targets[" + std::to_string(i) + "]");
      Target tg;
      t.number("x", tg.x);
      t.number("range", tg.range);
      t.number("depth", tg.depth);
      t.number("reflectivity", tg.reflectivity);
      t.finish();
      c.targets.push_back(tg);
    }
  }
  section(r, "simulation", [&](Reader& s) {
    s.number("sample_rate", c.simulation.sample_rate);
    s.number("record_duration", c.simulation.record_duration);
    s.number("noise_power_db", c.simulation.noise_power_db);
    s.number("signal_power_db", c.simulation.signal_power_db);
    s.number("receiver_gain_db", c.simulation.receiver_gain_db);
    s.integer("rng_seed", c.simulation.rng_seed);
    s.boolean("add_noise", c.simulation.add_noise);
    s.boolean("direct_path_only", c.simulation.direct_path_only);
  });
  section(r, "signal_chain", [&](Reader& s) {
    s.boolean("quantize", c.chain.quantize);
    s.integer("bits", c.chain.bits);
    s.boolean("apply_tvg", c.chain.apply_tvg);
    s.choice("tvg_variant", [&](const std::string& v) { c.chain.tvg_variant = parse_tvg_variant(v); });
    s.number("tvg_speed", c.chain.tvg_speed);
    s.integer("decimation", c.chain.decimation);
  });
  section(r, "beamformer", [&](Reader& s) {
    s.number("c_fixed", c.beamformer.c_fixed);
    s.integer("subarray_length", c.beamformer.subarray_length);
    s.number("mu_c", c.beamformer.prior.mu_c);
    s.number("sigma_c", c.beamformer.prior.sigma_c);
    s.integer("n_quad", c.beamformer.n_quad);
    s.number("snr0_db", c.beamformer.snr0_db);
    s.number("dr_db", c.beamformer.dr_db);
    if (const json* v = s.find("loading"); v && !v->is_null()) {
      if (!v->is_number()) throw ConfigError(s.field("loading"), "expected a number or null");
      c.beamformer.loading = v->get<double>();
    }
    s.choice("normalization",
             [&](const std::string& v) { c.beamformer.normalization = parse_cov_normalization(v); });
  });
  section(r, "grid", [&](Reader& s) {
    s.number("x_min", c.grid.x_min);
    s.number("x_max", c.grid.x_max);
    s.number("y_min", c.grid.y_min);
    s.number("y_max", c.grid.y_max);
    s.integer("n_x", c.grid.n_x);
    s.integer("n_y", c.grid.n_y);
  });
  section(r, "metrics", [&](Reader& s) {
    read_box(s, "target_box", c.metrics.target_box);
    read_box(s, "artifact_box", c.metrics.artifact_box);
    s.choice("fwhm_convention",
             [&](const std::string& v) { c.metrics.convention = parse_fwhm_convention(v); });
    s.number("dynamic_range_db", c.metrics.dynamic_range_db);
    s.integer("compare_n_quad", c.metrics.compare_n_quad);
  });
  r.finish();
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::ios_base::failure("cannot open config " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_run_config(ss.str());
}

std::string to_json(const RunConfig& c) {
  json j;
  j["array"] = {{"n_sensors", c.array.n_sensors},
                {"length", c.array.length},
                {"depth", c.array.depth},
                {"source_x", c.array.source_x},
                {"source_depth", c.array.source_depth}};
  j["pulse"] = {{"center_frequency", c.pulse.center_frequency},
                {"bandwidth", c.pulse.bandwidth},
                {"duration", c.pulse.duration}};
  json profile = json::array();
  for (const SosBreakpoint& b : c.environment.sos_profile) profile.push_back({{"depth", b.depth}, {"speed", b.speed}});
  j["environment"] = {{"bottom_depth", c.environment.bottom_depth},
                      {"sos_profile", profile},
                      {"surface_reflection", c.environment.surface_reflection},
                      {"bottom_reflection", c.environment.bottom_reflection}};
  j["targets"] = json::array();
  for (const Target& t : c.targets)
    j["targets"].push_back({{"x", t.x}, {"range", t.range}, {"depth", t.depth}, {"reflectivity", t.reflectivity}});
  j["simulation"] = {{"sample_rate", c.simulation.sample_rate},
                     {"record_duration", c.simulation.record_duration},
                     {"noise_power_db", c.simulation.noise_power_db},
                     {"signal_power_db", c.simulation.signal_power_db},
                     {"receiver_gain_db", c.simulation.receiver_gain_db},
                     {"rng_seed", c.simulation.rng_seed},
                     {"add_noise", c.simulation.add_noise},
                     {"direct_path_only", c.simulation.direct_path_only}};
  j["signal_chain"] = {{"quantize", c.chain.quantize},
                       {"bits", c.chain.bits},
                       {"apply_tvg", c.chain.apply_tvg},
                       {"tvg_variant", to_string(c.chain.tvg_variant)},
                       {"tvg_speed", c.chain.tvg_speed},
                       {"decimation", c.chain.decimation}};
  j["beamformer"] = {{"c_fixed", c.beamformer.c_fixed},
                     {"subarray_length", c.beamformer.subarray_length},
                     {"mu_c", c.beamformer.prior.mu_c},
                     {"sigma_c", c.beamformer.prior.sigma_c},
                     {"n_quad", c.beamformer.n_quad},
                     {"snr0_db", c.beamformer.snr0_db},
                     {"dr_db", c.beamformer.dr_db},
                     {"loading", c.beamformer.loading ? json(*c.beamformer.loading) : json(nullptr)},
                     {"normalization", to_string(c.beamformer.normalization)}};
  j["grid"] = {{"x_min", c.grid.x_min}, {"x_max", c.grid.x_max}, {"y_min", c.grid.y_min},
               {"y_max", c.grid.y_max}, {"n_x", c.grid.n_x},     {"n_y", c.grid.n_y}};
  j["metrics"] = {{"target_box", box_json(c.metrics.target_box)},
                  {"artifact_box", box_json(c.metrics.artifact_box)},
                  {"fwhm_convention", to_string(c.metrics.convention)},
                  {"dynamic_range_db", c.metrics.dynamic_range_db},
                  {"compare_n_quad", c.metrics.compare_n_quad}};
  return j.dump(2) + "\n";
}

void check_cube_matches(const CubeHeader& h, const RunConfig& cfg) {
  if (h.format != CubeFormat::real_f32) throw FormatError("data cube is not a raw real-valued cube");
  if (h.n_sensors != cfg.array.n_sensors)
    throw FormatError("data cube has " + std::to_string(h.n_sensors) + " sensors, config has " +
                      std::to_string(cfg.array.n_sensors));
  if (h.sample_rate != cfg.simulation.sample_rate)
    throw FormatError("data cube sample rate differs from simulation.sample_rate");
  if (h.n_samples != cfg.simulation.sample_count())
    throw FormatError("data cube length differs from simulation.record_duration * sample_rate");
}

}  // namespace mbf
