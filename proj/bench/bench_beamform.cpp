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

// Serial reference vs the OpenMP pixel loop on one cross-scene data set.
#include <benchmark/benchmark.h>

#include "mbf/beamform.hpp"
#include "mbf/pipeline.hpp"

using namespace mbf;

namespace {

struct Fixture {
  RunConfig cfg;
  BasebandCube bb;
  ArrayGeometry geom;
  ScanGrid grid{-2.0, 2.0, 30.0, 34.0, 32, 32};

  Fixture() {
    bb = preprocess(simulate(cfg).cube, cfg);
    geom = cfg.array.geometry();
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

BeamformerConfig config_for(int method) {
  return fixture().cfg.beamformer_for(static_cast<Method>(method));
}

void BM_Reference(benchmark::State& state) {
  const Fixture& f = fixture();
  const BeamformerConfig cfg = config_for(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(beamform_image_reference(f.bb, f.grid, f.geom, cfg));
  state.SetItemsProcessed(state.iterations() * std::int64_t(f.grid.pixel_count()));
  state.SetLabel(to_string(cfg.method));
}

void BM_Parallel(benchmark::State& state) {
  const Fixture& f = fixture();
  const BeamformerConfig cfg = config_for(int(state.range(0)));
  const int threads = int(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(beamform_image(f.bb, f.grid, f.geom, cfg, threads));
  state.SetItemsProcessed(state.iterations() * std::int64_t(f.grid.pixel_count()));
  state.SetLabel(std::string(to_string(cfg.method)) + (threads ? "" : " all cores"));
}

}  // namespace

// range(0): 0 = das, 1 = mvdr, 2 = bayes; range(1): threads, 0 = OpenMP default.
BENCHMARK(BM_Reference)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->ArgsProduct({{0, 1, 2}, {1, 0}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
