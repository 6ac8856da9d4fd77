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

#include <cstddef>
#include <vector>

namespace mbf {

/// Gauss-Hermite rule for the weight exp(-z^2) (physicists' convention).
struct QuadratureRule {
  std::vector<double> nodes;    // ascending, symmetric about 0
  std::vector<double> weights;  // positive, sum to sqrt(pi)

  std::size_t size() const { return nodes.size(); }
};

/// Gaussian prior on the speed of sound.
struct SosPrior {
  double mu_c = 1519.0;
  double sigma_c = 0.3;

  void validate() const;
};

/// n-point rule, 1 <= n <= 128. Nodes are eigenvalues of the Jacobi matrix
/// (Golub-Welsch), polished by Newton steps on the orthonormal recurrence;
/// weights come from the Christoffel sum so tiny tail weights keep full
/// relative precision.
QuadratureRule gauss_hermite(std::size_t n);

/// c = sqrt(2) * z * sigma_c + mu_c.
double node_to_sos(double z, const SosPrior& prior);

}  // namespace mbf
