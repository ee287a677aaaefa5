/*
 * Copyright 2026 The Lopsided Authors.
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

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "lopsided/arith.hpp"
#include "lopsided/counters.hpp"
#include "lopsided/detlab.hpp"
#include "lopsided/exponent_calculus.hpp"

namespace {

using namespace lopsided;

void BM_BoundLopsided(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<BoxProfile> profiles;
  for (int i = 0; i < 1024; ++i) {
    const double b = u(rng), a = b * u(rng);
    profiles.push_back(BoxProfile::FromRaw(a, b, std::max(b, 0.25) + 0.1 * u(rng) * (1 - b), 4));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(BoundLopsided(profiles[i++ & 1023]).exponent);
  }
}
BENCHMARK(BM_BoundLopsided);

void BM_PrimitiveZeros(benchmark::State& state) {
  const TernaryForm f = ParseForm("x1^2 + x2^2 - x3^2");
  const std::int64_t n = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(PrimitiveZeros(f, {n, n, n}).size());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_PrimitiveZeros)->RangeMultiplier(2)->Range(64, 512)->Complexity();

void BM_GaussReduce(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::int64_t> dist(-1000000, 1000000);
  std::vector<PlaneLattice> in;
  while (in.size() < 1024) {
    IntPair a{dist(rng), dist(rng)}, b{dist(rng), dist(rng)};
    if (a[0] * b[1] - a[1] * b[0] != 0) in.push_back(MakeLattice(a, b));
  }
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(GaussReduce(in[i++ & 1023]).det);
}
BENCHMARK(BM_GaussReduce);

void BM_CrtLattices(benchmark::State& state) {
  // 3 * 5 * 7 * 11 * 13 * 17.
  const std::uint64_t xi = 255255;
  for (auto _ : state) benchmark::DoNotOptimize(CrtLattices(static_cast<int>(state.range(0)), xi).size());
}
BENCHMARK(BM_CrtLattices)->DenseRange(4, 6);

void BM_CountSumsNaive(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        CountSumsNaive(4, static_cast<std::uint64_t>(state.range(0))).nontrivial);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CountSumsNaive)->RangeMultiplier(2)->Range(100, 1600)->Complexity()
    ->Unit(benchmark::kMillisecond);

void BM_CountSumsPipeline(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        CountSumsPipeline(4, static_cast<std::uint64_t>(state.range(0))).nontrivial);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CountSumsPipeline)->RangeMultiplier(2)->Range(100, 400)->Complexity()
    ->Unit(benchmark::kMillisecond);

void BM_XiPartialSums(benchmark::State& state) {
  const std::vector<std::uint64_t> ys{static_cast<std::uint64_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(XiPartialSums(0.625, ys).back());
}
BENCHMARK(BM_XiPartialSums)->Range(1 << 12, 1 << 20)->Unit(benchmark::kMillisecond);

void BM_ScanVanishing(benchmark::State& state) {
  const TernaryForm f = ParseForm("x1^2 + x2^2 - x3^2");
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p : PrimesUpTo(static_cast<std::uint64_t>(state.range(0))))
    if (p > 2) primes.push_back(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ScanVanishing(f, {50, 1300, 2000}, 2, 2 * std::log(2000.0), primes).traces.size());
  }
}
BENCHMARK(BM_ScanVanishing)->Arg(50)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_DeterminantDelta(benchmark::State& state) {
  const TernaryForm f = ParseForm("x1^2 + x2^2 - x3^2");
  const IntPoint3 box{400, 400, 600};
  const int big_d = static_cast<int>(state.range(0));
  const std::array<double, 3> b{std::log(400.0), std::log(401.0), std::log(600.0)};
  const ExponentSet s = BuildExponentSet(big_d, big_d * b[2], b, {0, 0, 2});
  const auto zeros = PrimitiveZeros(f, box);
  const auto fibers = FibersFromPoints(zeros, box, 3, ModPCurvePoints(f, 3));
  const ModPFiber* deepest = &fibers.front();
  for (const auto& fb : fibers)
    if (fb.points.size() > deepest->points.size()) deepest = &fb;
  if (SignNormalizedPoints(deepest->points).size() < s.size()) {
    state.SkipWithError("fiber too small");
    return;
  }
  for (auto _ : state) benchmark::DoNotOptimize(DeterminantDelta(*deepest, s).e);
  state.counters["E"] = static_cast<double>(s.size());
}
BENCHMARK(BM_DeterminantDelta)->DenseRange(2, 6, 2);

}  // namespace

BENCHMARK_MAIN();
