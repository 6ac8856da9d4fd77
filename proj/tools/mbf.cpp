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

// Command-line driver: simulate -> beamform -> metrics.
#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "mbf/config.hpp"
#include "mbf/cube_io.hpp"
#include "mbf/errors.hpp"
#include "mbf/image_io.hpp"
#include "mbf/metrics.hpp"
#include "mbf/pipeline.hpp"

namespace fs = std::filesystem;
using namespace mbf;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;     // missing file, bad arguments, invalid config
constexpr int kExitMismatch = 3;  // file header or grid mismatch

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("MBF_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    throw UsageError("MBF_THREADS must be a positive integer");
  }
  return 0;
}

RunConfig load_config(const std::string& path) {
  if (!fs::exists(path)) throw UsageError("config file not found: " + path);
  return load_run_config(path);
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void print_arrivals(const SimResult& sim) {
  std::printf("%-6s %-15s %-15s %14s %14s %s\n", "target", "tx_leg", "rx_leg", "delay_s", "amplitude", "");
  for (const ArrivalRecord& a : sim.arrivals)
    std::printf("%-6zu %-15s %-15s %14.9f %14.6e %s\n", a.target, to_string(a.arrival.tx_leg),
                to_string(a.arrival.rx_leg), a.arrival.delay, a.arrival.amplitude, a.dropped ? "(dropped)" : "");
  for (const std::string& w : sim.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

void run_simulate(const RunConfig& cfg, const fs::path& out) {
  const SimResult sim = simulate(cfg);
  ensure_parent(out);
  write_raw_cube(out, sim.cube);
  print_arrivals(sim);
  std::fprintf(stderr, "wrote %s (%zu sensors x %zu samples)\n", out.c_str(), sim.cube.n_sensors,
               sim.cube.n_samples);
}

std::map<std::string, std::string> image_labels(Method m, std::size_t n_quad) {
  std::map<std::string, std::string> labels{{"method", to_string(m)}};
  if (m == Method::bayes) labels["n_quad"] = std::to_string(n_quad);
  return labels;
}

void write_image_set(const std::string& prefix, const Image& img, const RunConfig& cfg, Method m,
                     std::size_t n_quad) {
  ensure_parent(prefix);
  const DbImage db = envelope_db(img);
  write_image_csv(prefix + ".csv", db, image_labels(m, n_quad));
  write_image_pgm(prefix + ".pgm", db, cfg.metrics.dynamic_range_db);
  write_flag_report(prefix + ".flags.json", img);
  const FlagSummary s = summarize_flags(img);
  if (s.flagged_pixels)
    std::fprintf(stderr, "%s: %zu flagged pixels (out_of_record %zu, not_pd %zu, fallback %zu)\n",
                 prefix.c_str(), s.flagged_pixels, s.out_of_record, s.not_positive_definite,
                 s.posterior_fallback);
}

RawDataCube load_cube(const std::string& path, const RunConfig& cfg) {
  if (!fs::exists(path)) throw UsageError("data file not found: " + path);
  check_cube_matches(read_cube_header(path), cfg);
  return read_raw_cube(path);
}

void run_beamform(const RunConfig& cfg, const BasebandCube& bb, Method m, std::size_t n_quad, int threads,
                  const std::string& prefix) {
  const auto t0 = std::chrono::steady_clock::now();
  const Image img = form_image(bb, cfg, m, n_quad, threads);
  std::fprintf(stderr, "%s: %s image in %.2f s\n", prefix.c_str(), to_string(m), seconds_since(t0));
  write_image_set(prefix, img, cfg, m, m == Method::bayes ? (n_quad ? n_quad : cfg.beamformer.n_quad) : 0);
}

MetricsReport compute_report(const RunConfig& cfg, const std::vector<std::string>& paths) {
  MetricsReport report;
  report.target_box = cfg.metrics.target_box;
  report.artifact_box = cfg.metrics.artifact_box;
  report.convention = cfg.metrics.convention;
  std::vector<LabelledDbImage> images;
  for (const std::string& p : paths) {
    if (!fs::exists(p)) throw UsageError("image file not found: " + p);
    images.push_back(read_image_csv(p));
    if (!(images.back().image.grid == images.front().image.grid))
      throw FormatError(p + ": grid differs from " + paths.front());
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    std::string method = images[i].labels.at("method");
    if (auto it = images[i].labels.find("n_quad"); it != images[i].labels.end()) method += "(" + it->second + ")";
    MethodMetrics m{method, fs::path(paths[i]).filename().string(), 0.0, 0.0};
    try {
      m.fwhm_m = fwhm_in_box(images[i].image, cfg.metrics.target_box, cfg.metrics.convention);
    } catch (const DomainError& e) {
      // Reported as null; the grid is too narrow to see the half-maximum.
      std::fprintf(stderr, "warning: %s: %s\n", paths[i].c_str(), e.what());
      m.fwhm_m = std::numeric_limits<double>::quiet_NaN();
    }
    m.pmal_db = pmal(images[i].image, cfg.metrics.target_box, cfg.metrics.artifact_box);
    report.results.push_back(m);
  }
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j)
      if (images[i].labels.at("method") == "bayes" && images[j].labels.at("method") == "bayes")
        report.rmse_db.push_back({report.results[i].image, report.results[j].image,
                                  rmse_db(images[i].image, images[j].image)});
  return report;
}

void write_report(const MetricsReport& report, const fs::path& out) {
  ensure_parent(out);
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot open " + out.string() + " for writing");
  f << report.to_json();
  for (const MethodMetrics& m : report.results)
    std::printf("%-12s fwhm %.4f m  pmal %.2f dB\n", m.method.c_str(), m.fwhm_m, m.pmal_db);
  for (const RmsePair& r : report.rmse_db) std::printf("rmse %s vs %s: %.2f dB\n", r.a.c_str(), r.b.c_str(), r.value);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multipath-robust sonar beamforming: simulate, beamform and evaluate"};
  app.failure_message(CLI::FailureMessage::help);
  app.require_subcommand(1);

  std::string config_path, out_path, data_path, method_name, out_dir;
  std::size_t n_quad = 0;
  int threads = 0;
  std::vector<std::string> image_paths;

  auto* sim = app.add_subcommand("simulate", "Simulate one ping and write the raw data cube");
  sim->add_option("--config", config_path, "Run configuration (JSON)")->required();
  sim->add_option("--out", out_path, "Output cube file")->required();

  auto* bf = app.add_subcommand("beamform", "Run the signal chain and one beamformer");
  bf->add_option("--config", config_path, "Run configuration (JSON)")->required();
  bf->add_option("--data", data_path, "Raw data cube")->required();
  bf->add_option("--method", method_name, "das | mvdr | bayes")
      ->required()
      ->check(CLI::IsMember({"das", "mvdr", "bayes"}));
  bf->add_option("--n-quad", n_quad, "Quadrature nodes for bayes (default from config)")
      ->check(CLI::Range(1, 128));
  bf->add_option("--out", out_path, "Output prefix (.csv, .pgm, .flags.json)")->required();
  bf->add_option("--threads", threads, "Worker threads (default: MBF_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  auto* met = app.add_subcommand("metrics", "Compute FWHM, PMAL and RMSE from image CSV files");
  met->add_option("--config", config_path, "Run configuration (JSON)")->required();
  met->add_option("images", image_paths, "Image CSV files")->required();
  met->add_option("--out", out_path, "Output report (JSON)")->required();

  auto* all = app.add_subcommand("all", "simulate, beamform with every method, then metrics");
  all->add_option("--config", config_path, "Run configuration (JSON)")->required();
  all->add_option("--out-dir", out_dir, "Output directory")->required();
  all->add_option("--threads", threads, "Worker threads (default: MBF_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    const RunConfig cfg = load_config(config_path);
    if (*sim) {
      run_simulate(cfg, out_path);
    } else if (*bf) {
      const int nt = resolve_threads(threads);
      const RawDataCube raw = load_cube(data_path, cfg);
      run_beamform(cfg, preprocess(raw, cfg), parse_method(method_name), n_quad, nt, out_path);
    } else if (*met) {
      write_report(compute_report(cfg, image_paths), out_path);
    } else if (*all) {
      const int nt = resolve_threads(threads);
      const fs::path dir(out_dir);
      fs::create_directories(dir);
      const fs::path cube = dir / "cube.bin";
      run_simulate(cfg, cube);
      const BasebandCube bb = preprocess(load_cube(cube.string(), cfg), cfg);
      const std::size_t nq = cfg.beamformer.n_quad;
      const std::size_t nq2 = cfg.metrics.compare_n_quad;
      run_beamform(cfg, bb, Method::das, 0, nt, (dir / "das").string());
      run_beamform(cfg, bb, Method::mvdr, 0, nt, (dir / "mvdr").string());
      const std::string bayes1 = (dir / ("bayes_q" + std::to_string(nq))).string();
      run_beamform(cfg, bb, Method::bayes, nq, nt, bayes1);
      std::vector<std::string> imgs{(dir / "das.csv").string(), (dir / "mvdr.csv").string(), bayes1 + ".csv"};
      if (nq2 != nq) {
        const std::string bayes2 = (dir / ("bayes_q" + std::to_string(nq2))).string();
        run_beamform(cfg, bb, Method::bayes, nq2, nt, bayes2);
        imgs.push_back(bayes2 + ".csv");
      }
      write_report(compute_report(cfg, imgs), dir / "report.json");
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "invalid config: %s\n", e.what());
    return kExitUsage;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "mismatch: %s\n", e.what());
    return kExitMismatch;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return 0;
}
