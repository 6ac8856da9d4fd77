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

#include "mbf/beamform.hpp"
#include "mbf/config.hpp"
#include "mbf/simulator.hpp"

namespace mbf {

/// Single-ping simulation of the configured scene.
SimResult simulate(const RunConfig& cfg);

/// Signal chain with the configured options.
BasebandCube preprocess(const RawDataCube& raw, const RunConfig& cfg);

/// Beamformed image; `n_quad` overrides the configured rule size for Bayes
/// when non-zero.
Image form_image(const BasebandCube& bb, const RunConfig& cfg, Method method, std::size_t n_quad = 0,
                 int threads = 0);

}  // namespace mbf
