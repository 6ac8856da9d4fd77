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

#include "mbf/image_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "mbf/errors.hpp"

namespace mbf {

namespace {

constexpr const char* kMagic = "# mbf-image";

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, const std::string& what) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw FormatError("image csv: cannot parse " + what + " '" + std::string(s) + "'");
  return v;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream f(path, mode);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return f;
}

}  // namespace

void write_image_csv(const std::filesystem::path& path, const DbImage& img,
                     const std::map<std::string, std::string>& labels) {
  if (!labels.count("method")) throw DomainError("write_image_csv: labels must include 'method'");
  std::ofstream f = open_out(path);
  f << kMagic;
  f << " method=" << labels.at("method");
  for (const auto& [k, v] : labels)
    if (k != "method") f << ' ' << k << '=' << v;
  const ScanGrid& g = img.grid;
  f << " x_min=" << format_double(g.x_min) << " x_max=" << format_double(g.x_max)
    << " y_min=" << format_double(g.y_min) << " y_max=" << format_double(g.y_max) << " n_x=" << g.n_x
    << " n_y=" << g.n_y << '\n';
  for (std::size_t iy = 0; iy < g.n_y; ++iy) {
    for (std::size_t ix = 0; ix < g.n_x; ++ix) {
      if (ix) f << ',';
      f << format_double(img.at(ix, iy));
    }
    f << '\n';
  }
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

LabelledDbImage read_image_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::string header;
  std::getline(f, header);
  if (header.rfind(kMagic, 0) != 0) throw FormatError(path.string() + ": missing '# mbf-image' header");

  LabelledDbImage out;
  std::istringstream hs(header.substr(std::string(kMagic).size()));
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw FormatError(path.string() + ": malformed header token '" + tok + "'");
    out.labels[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  auto need = [&](const std::string& key) -> const std::string& {
    const auto it = out.labels.find(key);
    if (it == out.labels.end()) throw FormatError(path.string() + ": header lacks '" + key + "'");
    return it->second;
  };
  need("method");
  ScanGrid& g = out.image.grid;
  g.x_min = parse_double(need("x_min"), "x_min");
  g.x_max = parse_double(need("x_max"), "x_max");
  g.y_min = parse_double(need("y_min"), "y_min");
  g.y_max = parse_double(need("y_max"), "y_max");
  g.n_x = static_cast<std::size_t>(parse_double(need("n_x"), "n_x"));
  g.n_y = static_cast<std::size_t>(parse_double(need("n_y"), "n_y"));
  for (const char* k : {"x_min", "x_max", "y_min", "y_max", "n_x", "n_y"}) out.labels.erase(k);
  try {
    g.validate();
  } catch (const DomainError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }

  out.image.pixels.reserve(g.pixel_count());
  std::string line;
  std::size_t rows = 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::size_t cols = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view cell(line.data() + start,
                                  (comma == std::string::npos ? line.size() : comma) - start);
      out.image.pixels.push_back(parse_double(cell, "pixel"));
      ++cols;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cols != g.n_x) throw FormatError(path.string() + ": row " + std::to_string(rows) + " has wrong width");
    ++rows;
  }
  if (rows != g.n_y) throw FormatError(path.string() + ": expected " + std::to_string(g.n_y) + " rows");
  return out;
}

void write_image_pgm(const std::filesystem::path& path, const DbImage& img, double dynamic_range_db) {
  if (!(dynamic_range_db > 0.0)) throw DomainError("write_image_pgm: dynamic range must be positive");
  std::ofstream f = open_out(path, std::ios::out | std::ios::binary);
  f << "P5\n" << img.grid.n_x << ' ' << img.grid.n_y << "\n255\n";
  std::vector<unsigned char> row(img.grid.n_x);
  for (std::size_t iy = 0; iy < img.grid.n_y; ++iy) {
    for (std::size_t ix = 0; ix < img.grid.n_x; ++ix) {
      const double v = std::clamp(img.at(ix, iy), -dynamic_range_db, 0.0);
      row[ix] = static_cast<unsigned char>(std::lround(255.0 * (v + dynamic_range_db) / dynamic_range_db));
    }
    f.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

void write_flag_report(const std::filesystem::path& path, const Image& img) {
  const FlagSummary s = summarize_flags(img);
  nlohmann::json j;
  j["pixels"] = img.pixels.size();
  j["flagged_pixels"] = s.flagged_pixels;
  j["out_of_record"] = s.out_of_record;
  j["not_positive_definite"] = s.not_positive_definite;
  j["posterior_fallback"] = s.posterior_fallback;
  j["flagged"] = nlohmann::json::array();
  for (std::size_t iy = 0; iy < img.grid.n_y; ++iy)
    for (std::size_t ix = 0; ix < img.grid.n_x; ++ix)
      if (const unsigned f = img.flags[iy * img.grid.n_x + ix])
        j["flagged"].push_back({{"ix", ix}, {"iy", iy}, {"flags", f}});
  std::ofstream f = open_out(path);
  f << j.dump(2) << '\n';
}

}  // namespace mbf
