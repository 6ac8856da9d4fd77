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

#include "mbf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "mbf/errors.hpp"

namespace mbf {

std::vector<double> DbImage::row(std::size_t iy) const {
  if (iy >= grid.n_y) throw DomainError("DbImage::row: index out of range");
  const auto first = pixels.begin() + static_cast<std::ptrdiff_t>(iy * grid.n_x);
  return {first, first + static_cast<std::ptrdiff_t>(grid.n_x)};
}

DbImage envelope_db(const Image& img) {
  double peak = 0.0;
  for (const cdouble& v : img.pixels) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0) || !std::isfinite(peak)) throw DomainError("envelope_db: image has no nonzero finite pixel");
  DbImage out;
  out.grid = img.grid;
  out.pixels.resize(img.pixels.size());
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const double m = std::abs(img.pixels[i]) / peak;
    out.pixels[i] = m > 0.0 ? std::max(20.0 * std::log10(m), kDbFloor) : kDbFloor;
  }
  return out;
}

const char* to_string(FwhmConvention c) { return c == FwhmConvention::amplitude ? "amplitude" : "intensity"; }

FwhmConvention parse_fwhm_convention(const std::string& s) {
  if (s == "amplitude") return FwhmConvention::amplitude;
  if (s == "intensity") return FwhmConvention::intensity;
  throw DomainError("unknown FWHM convention '" + s + "' (expected amplitude or intensity)");
}

double fwhm(std::span<const double> profile_db, double dx, FwhmConvention convention) {
  if (profile_db.size() < 3) throw DomainError("fwhm: profile needs at least 3 samples");
  if (!(dx > 0.0)) throw DomainError("fwhm: sample spacing must be positive");
  std::vector<double> a(profile_db.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::pow(10.0, profile_db[i] / 20.0);
  const std::size_t k = static_cast<std::size_t>(std::max_element(a.begin(), a.end()) - a.begin());
  const double level = a[k] * (convention == FwhmConvention::amplitude ? 0.5 : std::sqrt(0.5));

  // Walk outward to the first sample at or below the level, then interpolate.
  std::size_t l = k;
  while (l > 0 && a[l] > level) --l;
  if (a[l] > level || l == k) throw DomainError("fwhm: half-maximum level never crossed on the left side");
  std::size_t r = k;
  while (r + 1 < a.size() && a[r] > level) ++r;
  if (a[r] > level || r == k) throw DomainError("fwhm: half-maximum level never crossed on the right side");

  const double xl = double(l) + (level - a[l]) / (a[l + 1] - a[l]);
  const double xr = double(r) - (level - a[r]) / (a[r - 1] - a[r]);
  return (xr - xl) * dx;
}

BoxPeak box_peak(const DbImage& img, const Box& box) {
  BoxPeak best;
  bool found = false;
  for (std::size_t iy = 0; iy < img.grid.n_y; ++iy) {
    for (std::size_t ix = 0; ix < img.grid.n_x; ++ix) {
      if (!box.contains(img.grid.point(ix, iy))) continue;
      const double v = img.at(ix, iy);
      if (!found || v > best.level_db) best = {v, ix, iy};
      found = true;
    }
  }
  if (!found) throw DomainError("box contains no pixel of the grid");
  return best;
}

double pmal(const DbImage& img, const Box& target_box, const Box& artifact_box) {
  return box_peak(img, artifact_box).level_db - box_peak(img, target_box).level_db;
}

double fwhm_in_box(const DbImage& img, const Box& target_box, FwhmConvention convention) {
  const BoxPeak peak = box_peak(img, target_box);
  const std::vector<double> profile = img.row(peak.iy);
  return fwhm(profile, img.grid.dx(), convention);
}

double rmse_db(const DbImage& a, const DbImage& b) {
  if (!(a.grid == b.grid) || a.pixels.size() != b.pixels.size())
    throw DomainError("rmse_db: images are on different grids");
  if (a.pixels.empty()) throw DomainError("rmse_db: empty images");
  double peak = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const double la = std::pow(10.0, a.pixels[i] / 20.0);
    const double lb = std::pow(10.0, b.pixels[i] / 20.0);
    peak = std::max({peak, la, lb});
    sum += (la - lb) * (la - lb);
  }
  if (!(peak > 0.0)) throw DomainError("rmse_db: images have no nonzero pixel");
  const double rms = std::sqrt(sum / double(a.pixels.size())) / peak;
  return rms > 0.0 ? std::max(20.0 * std::log10(rms), kRmseFloorDb) : kRmseFloorDb;
}

namespace {

nlohmann::json box_json(const Box& b) {
  return {{"x_min", b.x_min}, {"x_max", b.x_max}, {"y_min", b.y_min}, {"y_max", b.y_max}};
}

}  // namespace

std::string MetricsReport::to_json() const {
  nlohmann::json j;
  j["boxes"] = {{"target", box_json(target_box)}, {"artifact", box_json(artifact_box)}};
  j["fwhm_convention"] = to_string(convention);
  j["results"] = nlohmann::json::array();
  for (const MethodMetrics& m : results)
    j["results"].push_back({{"method", m.method},
                            {"image", m.image},
                            {"fwhm_m", std::isfinite(m.fwhm_m) ? nlohmann::json(m.fwhm_m) : nlohmann::json(nullptr)},
                            {"pmal_db", m.pmal_db}});
  j["rmse_db"] = nlohmann::json::array();
  for (const RmsePair& r : rmse_db) j["rmse_db"].push_back({{"a", r.a}, {"b", r.b}, {"value", r.value}});
  return j.dump(2) + "\n";
}

}  // namespace mbf
