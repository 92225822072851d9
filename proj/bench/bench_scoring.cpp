/*
 * Copyright (C) 2026 The Tappy Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serial reference vs. OpenMP batch scoring. Thread count follows
// OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "tappy/kernels.hpp"

namespace {

std::vector<tappy::model::PhysicalSize> random_sizes(std::size_t n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> mm(0.5, 60.0);
  std::vector<tappy::model::PhysicalSize> sizes(n);
  for (auto& s : sizes) s = {mm(rng), mm(rng)};
  return sizes;
}

template <auto Kernel>
void BM_score(benchmark::State& state) {
  const auto sizes = random_sizes(static_cast<std::size_t>(state.range(0)));
  std::vector<tappy::model::Prediction> out(sizes.size());
  for (auto _ : state) {
    Kernel(sizes, {}, out);
    benchmark::DoNotOptimize(out.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = tappy::kernels::max_threads();
}

}  // namespace

BENCHMARK(BM_score<tappy::kernels::score_batch_serial>)->Name("score_batch_serial")->RangeMultiplier(16)->Range(64, 1 << 20);
BENCHMARK(BM_score<static_cast<void (*)(std::span<const tappy::model::PhysicalSize>,
                                        const tappy::model::ModelCoefficients&,
                                        std::span<tappy::model::Prediction>)>(tappy::kernels::score_batch)>)
    ->Name("score_batch")->RangeMultiplier(16)->Range(64, 1 << 20);

BENCHMARK_MAIN();
