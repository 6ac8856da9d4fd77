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

#include "mbf/fractional_delay.hpp"

#include "mbf/core_model.hpp"

namespace mbf {

std::array<double, FractionalDelay::kTaps> FractionalDelay::taps(double frac) {
  std::array<double, kTaps> h{};
  if (frac == 0.0) {
    h[kHalf - 1] = 1.0;
    return h;
  }
  // sin(pi * (frac + m)) = (-1)^m sin(pi * frac) for integer m.
  const double s = std::sin(kPi * frac);
  double sum = 0.0;
  for (int i = 0; i < kTaps; ++i) {
    const double d = frac + double(kHalf - 1 - i);
    const double sign = ((kHalf - 1 - i) % 2 == 0) ? 1.0 : -1.0;
    const double sinc = sign * s / (kPi * d);
    const double window = 0.5 * (1.0 + std::cos(kPi * d / double(kHalf)));
    h[static_cast<std::size_t>(i)] = sinc * window;
    sum += h[static_cast<std::size_t>(i)];
  }
  for (double& v : h) v /= sum;
  return h;
}

}  // namespace mbf
