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

#include "mbf/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "mbf/errors.hpp"

namespace mbf {

void SosPrior::validate() const {
  if (!(mu_c > 0.0)) throw DomainError("prior: mu_c must be positive");
  if (!(sigma_c >= 0.0)) throw DomainError("prior: sigma_c must be non-negative");
}

namespace {

// Orthonormal Hermite polynomials p_0 .. p_n at z (w.r.t. exp(-z^2)).
// Returns p_n and fills p_{n-1} and the Christoffel sum of p_0^2 .. p_{n-1}^2.
double orthonormal_hermite(std::size_t n, double z, double& prev, double& christoffel) {
  double p0 = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  double p1 = std::sqrt(2.0) * z * p0;
  christoffel = p0 * p0;
  if (n == 1) {
    prev = p0;
    return p1;
  }
  christoffel += p1 * p1;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double p2 = std::sqrt(2.0 / double(k + 1)) * z * p1 - std::sqrt(double(k) / double(k + 1)) * p0;
    p0 = p1;
    p1 = p2;
    christoffel += p1 * p1;
  }
  // p1 now holds p_{n-1}; one more step for p_n.
  const double pn = std::sqrt(2.0 / double(n)) * z * p1 - std::sqrt(double(n - 1) / double(n)) * p0;
  prev = p1;
  return pn;
}

}  // namespace

QuadratureRule gauss_hermite(std::size_t n) {
  if (n < 1 || n > 128) throw DomainError("gauss_hermite: n must lie in [1, 128]");
  QuadratureRule rule;
  if (n == 1) {
    rule.nodes = {0.0};
    rule.weights = {std::sqrt(std::numbers::pi)};
    return rule;
  }

  // Jacobi matrix: zero diagonal, off-diagonal sqrt(k / 2).
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n - 1));
  for (std::size_t k = 1; k < n; ++k) sub(static_cast<Eigen::Index>(k - 1)) = std::sqrt(0.5 * double(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw DomainError("gauss_hermite: eigensolver failed");

  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double z = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    double prev = 0.0, christoffel = 0.0;
    for (int it = 0; it < 3; ++it) {
      const double pn = orthonormal_hermite(n, z, prev, christoffel);
      // p_n' = sqrt(2 n) p_{n-1}
      z -= pn / (std::sqrt(2.0 * double(n)) * prev);
    }
    orthonormal_hermite(n, z, prev, christoffel);
    rule.nodes[i] = z;
    rule.weights[i] = 1.0 / christoffel;
  }

  // Enforce exact mirror symmetry.
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    const double z = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -z;
    rule.nodes[j] = z;
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double node_to_sos(double z, const SosPrior& prior) {
  return std::sqrt(2.0) * z * prior.sigma_c + prior.mu_c;
}

}  // namespace mbf
