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

#include <array>
#include <cmath>
#include <cstddef>
#include <span>

namespace mbf {

/// 8-tap Hann-windowed sinc interpolator, taps normalised to unit DC gain.
///
/// For a position `pos` the taps cover samples floor(pos) - 3 .. floor(pos) + 4.
struct FractionalDelay {
  static constexpr int kTaps = 8;
  static constexpr int kHalf = kTaps / 2;

  /// Taps for fractional offset `frac` in [0, 1); tap i weights sample floor(pos) - 3 + i.
  static std::array<double, kTaps> taps(double frac);

  /// Band-limited value of `x` at continuous index `pos`; samples outside the span are zero.
  template <typename T>
  static T interpolate(std::span<const T> x, double pos) {
    const double base = std::floor(pos);
    const auto i0 = static_cast<std::ptrdiff_t>(base) - (kHalf - 1);
    const auto h = taps(pos - base);
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    T acc{};
    for (int i = 0; i < kTaps; ++i) {
      const std::ptrdiff_t k = i0 + i;
      if (k >= 0 && k < n) acc += x[static_cast<std::size_t>(k)] * h[static_cast<std::size_t>(i)];
    }
    return acc;
  }
};

}  // namespace mbf
