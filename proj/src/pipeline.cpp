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

#include "mbf/pipeline.hpp"

namespace mbf {

SimResult simulate(const RunConfig& cfg) {
  return synthesize_rx(cfg.targets, cfg.array.geometry(), cfg.pulse, cfg.environment, cfg.simulation);
}

BasebandCube preprocess(const RawDataCube& raw, const RunConfig& cfg) {
  return run_chain(raw, cfg.pulse, cfg.chain);
}

Image form_image(const BasebandCube& bb, const RunConfig& cfg, Method method, std::size_t n_quad, int threads) {
  BeamformerConfig b = cfg.beamformer_for(method);
  if (n_quad > 0) b.n_quad = n_quad;
  return beamform_image(bb, cfg.grid, cfg.array.geometry(), b, threads);
}

}  // namespace mbf
