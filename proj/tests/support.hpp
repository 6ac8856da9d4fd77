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

#include <Eigen/Dense>
#include <complex>
#include <random>

#include "mbf/config.hpp"
#include "mbf/covariance.hpp"

namespace mbf::test {

inline Eigen::MatrixXcd random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = {n(rng), n(rng)};
  return m;
}

inline Eigen::MatrixXcd random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const Eigen::MatrixXcd a = random_complex(n, n, rng);
  return 0.5 * (a + a.adjoint());
}

/// Positive definite: A A^H + n I.
inline Eigen::MatrixXcd random_pd(Eigen::Index n, std::mt19937_64& rng) {
  const Eigen::MatrixXcd a = random_complex(n, n, rng);
  return a * a.adjoint() + double(n) * Eigen::MatrixXcd::Identity(n, n);
}

inline Eigen::MatrixXcd exchange(Eigen::Index n) {
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) j(i, n - 1 - i) = 1.0;
  return j;
}

inline double rel_diff(std::complex<double> a, std::complex<double> b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

/// Small, fast scene: one target at 36 m, noiseless unless asked.
inline RunConfig single_target_config(bool noise = false) {
  RunConfig c;
  c.targets = {{0.0, 36.0, 90.0, 1.0}};
  c.simulation.add_noise = noise;
  c.simulation.record_duration = 0.08;
  c.grid = {-1.0, 1.0, 35.0, 37.0, 9, 9};
  return c;
}

}  // namespace mbf::test
