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

#include "mbf/errors.hpp"
#include "mbf/quadrature.hpp"

using namespace mbf;
using Catch::Approx;

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);

// Integral of z^k exp(-z^2) over the real line: Gamma((k+1)/2) for even k.
double gaussian_moment(int k) { return k % 2 ? 0.0 : std::tgamma(0.5 * (k + 1)); }

// 10^6-point trapezoid of exp(-z^2) f(z) on [-12, 12].
template <class F>
double trapezoid(F f) {
  const std::size_t n = 1000000;
  const double a = -12.0, h = 24.0 / double(n - 1);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = a + h * double(i);
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    s += w * std::exp(-z * z) * f(z);
  }
  return s * h;
}

}  // namespace

TEST_CASE("gauss_hermite: one and two points") {
  const QuadratureRule r1 = gauss_hermite(1);
  CHECK(r1.nodes == std::vector<double>{0.0});
  CHECK(r1.weights[0] == Approx(kSqrtPi).epsilon(1e-15));

  const QuadratureRule r2 = gauss_hermite(2);
  CHECK(r2.nodes[0] == Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(r2.nodes[1] == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(r2.weights[0] == Approx(kSqrtPi / 2.0).epsilon(1e-15));
  CHECK(r2.weights[1] == Approx(kSqrtPi / 2.0).epsilon(1e-15));

  CHECK_THROWS_AS(gauss_hermite(0), DomainError);
  CHECK_THROWS_AS(gauss_hermite(129), DomainError);
}

TEST_CASE("gauss_hermite: symmetric, positive, weights sum to sqrt(pi)") {
  for (std::size_t n = 1; n <= 128; ++n) {
    const QuadratureRule r = gauss_hermite(n);
    REQUIRE(r.size() == n);
    CHECK(std::accumulate(r.weights.begin(), r.weights.end(), 0.0) == Approx(kSqrtPi).epsilon(1e-12));
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(r.nodes[i] == -r.nodes[n - 1 - i]);
      CHECK(r.weights[i] == r.weights[n - 1 - i]);
      CHECK(r.weights[i] > 0.0);
      if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
    }
  }
}

TEST_CASE("gauss_hermite: exact for every moment up to degree 2n-1") {
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 16u, 32u, 64u, 128u}) {
    const QuadratureRule r = gauss_hermite(n);
    for (int k = 0; k <= int(2 * n - 1); ++k) {
      double s = 0.0, mass = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        s += r.weights[i] * std::pow(r.nodes[i], k);
        mass += r.weights[i] * std::pow(std::abs(r.nodes[i]), k);
      }
      const double exact = gaussian_moment(k);
      if (k % 2) {
        CHECK(std::abs(s) <= 1e-14 * mass);  // cancellation of mirrored terms
      } else {
        INFO("n=" << n << " k=" << k);
        CHECK(std::abs(s - exact) <= 1e-10 * exact);
      }
    }
    double second = 0.0;
    for (std::size_t i = 0; i < n; ++i) second += r.weights[i] * r.nodes[i] * r.nodes[i];
    if (n >= 2) CHECK(second == Approx(kSqrtPi / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("gauss_hermite: cos z converges to a trapezoid oracle") {
  const double oracle = trapezoid([](double z) { return std::cos(z); });
  const QuadratureRule r = gauss_hermite(8);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::cos(r.nodes[i]);
  CHECK(std::abs(s - oracle) < 1e-8);

  double prev_err = 1.0;
  for (std::size_t n : {1u, 2u, 4u, 6u}) {
    const QuadratureRule q = gauss_hermite(n);
    double t = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) t += q.weights[i] * std::cos(q.nodes[i]);
    const double err = std::abs(t - oracle);
    CHECK(err < prev_err);
    prev_err = err;
  }
}

TEST_CASE("node_to_sos: affine map") {
  const SosPrior prior{1519.0, 0.3};
  CHECK(node_to_sos(0.0, prior) == 1519.0);
  CHECK(node_to_sos(1.0, prior) == Approx(1519.0 + 0.3 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(node_to_sos(1.0, prior) == Approx(1519.424).margin(5e-4));
  const SosPrior collapsed{1500.0, 0.0};
  for (double z : {-3.0, -0.1, 2.0}) CHECK(node_to_sos(z, collapsed) == 1500.0);

  const QuadratureRule r = gauss_hermite(32);
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(node_to_sos(r.nodes[i], prior) > node_to_sos(r.nodes[i - 1], prior));

  CHECK_THROWS_AS(SosPrior({0.0, 1.0}).validate(), DomainError);
  CHECK_THROWS_AS(SosPrior({1500.0, -1.0}).validate(), DomainError);
}
