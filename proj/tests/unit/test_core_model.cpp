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

#include <cmath>
#include <numeric>
#include <random>

#include "mbf/core_model.hpp"
#include "mbf/errors.hpp"

using namespace mbf;
using Catch::Approx;

namespace {

ArrayGeometry single_sensor_at(double x) {
  ArrayGeometry g;
  g.sensor_x = {x};
  return g;
}

}  // namespace

TEST_CASE("round_trip_time: collinear geometry gives 2r/c") {
  const ArrayGeometry g = single_sensor_at(0.0);
  CHECK(round_trip_time({0.0, 36.0}, 1519.0, 0, g) == Approx(72.0 / 1519.0).epsilon(1e-15));
}

TEST_CASE("round_trip_time: offset sensor uses the Pythagorean receive leg") {
  const ArrayGeometry g = single_sensor_at(0.5);
  const double expected = (36.0 + std::sqrt(36.0 * 36.0 + 0.25)) / 1519.0;
  CHECK(round_trip_time({0.0, 36.0}, 1519.0, 0, g) == Approx(expected).epsilon(1e-15));
}

TEST_CASE("round_trip_time: doubling c halves the time") {
  const ArrayGeometry g = ArrayGeometry::uniform_line(30, 1.0, 70.0);
  for (std::size_t n = 0; n < g.size(); ++n)
    CHECK(round_trip_time({0.3, 33.0}, 3038.0, n, g) ==
          Approx(0.5 * round_trip_time({0.3, 33.0}, 1519.0, n, g)).epsilon(1e-15));
}

TEST_CASE("round_trip_time: rejects non-positive speed and bad index") {
  const ArrayGeometry g = single_sensor_at(0.0);
  CHECK_THROWS_AS(round_trip_time({0.0, 10.0}, 0.0, 0, g), DomainError);
  CHECK_THROWS_AS(round_trip_time({0.0, 10.0}, -1.0, 0, g), DomainError);
  CHECK_THROWS_AS(round_trip_time({0.0, 10.0}, 1500.0, 1, g), DomainError);
}

TEST_CASE("round_trip_time: time times c equals path length, monotone in c") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(-5.0, 5.0), uy(1.0, 60.0), uc(1400.0, 1600.0);
  const ArrayGeometry g = ArrayGeometry::uniform_line(30, 1.0, 70.0);
  for (int trial = 0; trial < 500; ++trial) {
    const FocalPoint p{ux(rng), uy(rng)};
    const double c = uc(rng);
    const std::size_t n = static_cast<std::size_t>(trial) % g.size();
    const double dist = round_trip_distance(p, n, g);
    const double direct = std::hypot(p.x - g.source_x, p.y) + std::hypot(p.x - g.sensor_x[n], p.y);
    CHECK(dist == Approx(direct).epsilon(1e-15));
    CHECK(round_trip_time(p, c, n, g) * c == Approx(dist).epsilon(1e-14));
    CHECK(round_trip_time(p, c + 1.0, n, g) < round_trip_time(p, c, n, g));
  }
}

TEST_CASE("steering_vector: single sensor and equal delays") {
  const double w = kTwoPi * 30e3;
  const auto a1 = steering_vector({0.0, 20.0}, 1500.0, single_sensor_at(0.2), w);
  REQUIRE(a1.size() == 1);
  CHECK(std::abs(a1[0]) == Approx(1.0).epsilon(1e-15));

  // Two sensors mirrored about the source see the broadside point at equal delay.
  ArrayGeometry pair;
  pair.sensor_x = {-0.5, 0.5};
  const auto a2 = steering_vector({0.0, 20.0}, 1500.0, pair, w);
  CHECK(a2[0] == a2[1]);
}

TEST_CASE("steering_vector: broadside point on a symmetric array gives mirrored entries") {
  const ArrayGeometry g = ArrayGeometry::uniform_line(30, 1.0, 70.0);
  const auto a = steering_vector({0.0, 36.0}, 1519.0, g, kTwoPi * 30e3);
  for (std::size_t n = 0; n < a.size(); ++n) {
    CHECK(std::abs(a[n]) == Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(a[n] - a[a.size() - 1 - n]) < 1e-9);
  }
}

TEST_CASE("steering_vector: entry phase equals carrier times delay") {
  const ArrayGeometry g = ArrayGeometry::uniform_line(5, 1.0, 70.0);
  const double w = kTwoPi * 30e3;
  const FocalPoint p{0.4, 12.0};
  const auto a = steering_vector(p, 1500.0, g, w);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const cdouble expected = std::polar(1.0, -w * round_trip_time(p, 1500.0, n, g));
    CHECK(std::abs(a[n] - expected) < 1e-12);
  }
}

TEST_CASE("hann_weights: closed forms") {
  CHECK(hann_weights(1) == std::vector<double>{1.0});
  CHECK(hann_weights(2) == std::vector<double>{0.5, 0.5});
  const auto h3 = hann_weights(3);
  CHECK(h3[0] == 0.0);
  CHECK(h3[1] == Approx(1.0));
  CHECK(h3[2] == 0.0);
  // Unnormalised n=5: 0.5 - 0.5 cos(2 pi k / 4) = 0, 0.5, 1, 0.5, 0 (sum 2).
  const auto h5 = hann_weights(5);
  const std::vector<double> expected{0.0, 0.25, 0.5, 0.25, 0.0};
  for (std::size_t k = 0; k < 5; ++k) CHECK(h5[k] == Approx(expected[k]).margin(1e-15));
  CHECK_THROWS_AS(hann_weights(0), DomainError);
}

TEST_CASE("hann_weights: unit sum and palindromic for every length") {
  for (std::size_t n = 1; n <= 64; ++n) {
    const auto h = hann_weights(n);
    CHECK(std::accumulate(h.begin(), h.end(), 0.0) == Approx(1.0).epsilon(1e-14));
    for (std::size_t k = 0; k < n; ++k) CHECK(h[k] == h[n - 1 - k]);
  }
}

TEST_CASE("geometry and grid validation") {
  ArrayGeometry g;
  CHECK_THROWS_AS(g.validate(), DomainError);
  g.sensor_x = {0.0, 0.0};
  CHECK_THROWS_AS(g.validate(), DomainError);
  g.sensor_x = {0.0, 1.0};
  CHECK_NOTHROW(g.validate());

  ScanGrid grid;
  CHECK_NOTHROW(grid.validate());
  CHECK(grid.x_at(0) == -6.0);
  CHECK(grid.x_at(grid.n_x - 1) == Approx(6.0));
  CHECK(grid.y_at(grid.n_y - 1) == Approx(42.0));
  grid.n_x = 0;
  CHECK_THROWS_AS(grid.validate(), DomainError);

  const ArrayGeometry line = ArrayGeometry::uniform_line(30, 1.0, 70.0);
  CHECK(line.sensor_x.front() == Approx(-0.5));
  CHECK(line.sensor_x.back() == Approx(0.5));
  CHECK(line.center_x() == Approx(0.0).margin(1e-15));

  LfmPulse pulse;
  CHECK(pulse.start_frequency() == 20e3);
  CHECK(pulse.stop_frequency() == 40e3);
  pulse.bandwidth = 60e3;
  CHECK_THROWS_AS(pulse.validate(), DomainError);
}
