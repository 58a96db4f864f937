// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "facegen/bending_energy.hpp"
#include "facegen/synthetic_corpus.hpp"

namespace facegen {
namespace {

void BM_BuildBendingSystem(benchmark::State& state) {
  const auto samples = static_cast<std::size_t>(state.range(0));
  const auto corpus = generate_synthetic_corpus(1, 1, 4000, {ExpressionLabel::neutral()});
  const auto indices = choose_sample_indices(4000, samples, 1);
  for (auto _ : state) benchmark::DoNotOptimize(build_bending_system(corpus.faces()[0], indices));
}
BENCHMARK(BM_BuildBendingSystem)->Arg(100)->Arg(250)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_BendingEnergy(benchmark::State& state) {
  const auto samples = static_cast<std::size_t>(state.range(0));
  const auto corpus = generate_synthetic_corpus(2, 2, 4000, {ExpressionLabel::neutral()});
  const auto system = build_bending_system(corpus.faces()[0], choose_sample_indices(4000, samples, 2));
  for (auto _ : state) benchmark::DoNotOptimize(bending_energy(system, corpus.faces()[1]));
}
BENCHMARK(BM_BendingEnergy)->Arg(100)->Arg(250)->Arg(500);

void BM_PairwiseEnergyTable(benchmark::State& state) {
  const auto faces = static_cast<std::size_t>(state.range(0));
  const auto cat = ExpressionLabel::neutral();
  const auto corpus = generate_synthetic_corpus(3, faces, 2000, {cat});
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_energy_table(corpus, cat, 150, 3));
}
BENCHMARK(BM_PairwiseEnergyTable)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace facegen
