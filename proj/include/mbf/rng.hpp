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

#include <cstdint>

namespace mbf {

/// Counter-based standard normal generator.
///
/// Each draw is a pure function of (seed, stream, counter), so per-sensor noise
/// can be generated in any order or thread and still be bit-identical.
class CounterNormal {
 public:
  CounterNormal(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + 0x9E3779B97F4A7C15ULL))) {}

  double operator()(std::uint64_t counter) const;

  static std::uint64_t mix(std::uint64_t z);

 private:
  double uniform(std::uint64_t counter) const;

  std::uint64_t key_;
};

}  // namespace mbf
