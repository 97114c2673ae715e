/*
 * Copyright 2026 The Footprint Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <string>

#include <benchmark/benchmark.h>

#include "footprint/losses.h"
#include "footprint/propagation.h"
#include "footprint/random.h"
#include "footprint/sequence.h"

namespace {

using footprint::CounterRng;
using footprint::Frame;
using footprint::PersonObservation;
using footprint::Sequence;
using footprint::geometry::RigidTransform;

// Straight drive along camera z with objects scattered ahead of it.
Sequence MakeSequence(int n_frames, int n_objects) {
  CounterRng rng(1);
  Sequence seq;
  seq.sequence_id = "bench";
  seq.intrinsics = {500, 500, 320, 240, 640, 480};
  for (int f = 0; f < n_frames; ++f) {
    seq.frames.push_back(Frame{f, 0.1 * f, RigidTransform::Translation(0, 0, 0.5 * f)});
    for (int o = 0; o < n_objects; ++o) {
      seq.observations.push_back(PersonObservation{
          "o" + std::to_string(o), f,
          {rng.Uniform(-8.0, 8.0), 1.6, rng.Uniform(4.0, 40.0)}});
    }
  }
  return seq;
}

void BM_PropagateFootprints(benchmark::State& state) {
  const Sequence seq = MakeSequence(static_cast<int>(state.range(0)),
                                    static_cast<int>(state.range(1)));
  const footprint::propagation::PropagationParams params;
  const std::int64_t ref = state.range(0) / 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(footprint::propagation::PropagateFootprints(seq, ref, params));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(seq.observations.size()));
}
BENCHMARK(BM_PropagateFootprints)->Args({20, 5})->Args({200, 50});

void BM_PropagateDirections(benchmark::State& state) {
  const Sequence seq = MakeSequence(static_cast<int>(state.range(0)), 20);
  const footprint::propagation::PropagationParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(footprint::propagation::PropagateDirections(seq, 0, params));
  }
}
BENCHMARK(BM_PropagateDirections)->Arg(50);

void BM_ClassBalancedLoss(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  CounterRng rng(2);
  footprint::ScoreMap scores(side, side, 0.0);
  footprint::BinaryMap labels(side, side, 0);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores.at_flat(i) = rng.Uniform01();
    labels.at_flat(i) = rng.Uniform01() < 0.1 ? 1 : 0;
  }
  const auto weights = footprint::losses::ComputeClassWeights(labels);
  for (auto _ : state) {
    benchmark::DoNotOptimize(footprint::losses::ClassBalancedLoss(scores, labels, weights));
  }
}
BENCHMARK(BM_ClassBalancedLoss)->Arg(120);

}  // namespace

BENCHMARK_MAIN();
