// Copyright 2026 The otrobust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <random>

#include <benchmark/benchmark.h>

#include "otrobust/harness.hpp"
#include "otrobust/transport.hpp"

namespace ot = otrobust;

namespace {

const ot::Plant& plant() {
  static const ot::Plant p = ot::build_plant(ot::ScenarioConfig{}, true);
  return p;
}

void BM_PropagateIcEnsemble(benchmark::State& state) {
  ot::ScenarioConfig c;
  c.samples = static_cast<std::size_t>(state.range(0));
  c.tf = 2.0;
  const auto ctrl = state.range(1) == 0 ? ot::ControllerKind::kLqr : ot::ControllerKind::kGsLqr;
  for (auto _ : state) benchmark::DoNotOptimize(ot::propagate_level(c, plant(), ctrl, 0.0));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 200);
}
BENCHMARK(BM_PropagateIcEnsemble)->Args({50, 0})->Args({200, 0})->Args({200, 1})->Unit(benchmark::kMillisecond);

ot::DiscreteDistribution cloud(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<Eigen::VectorXd> pts(n, Eigen::VectorXd(7));
  for (auto& p : pts)
    for (int k = 0; k < 7; ++k) p(k) = nd(rng);
  return ot::DiscreteDistribution::uniform(std::move(pts));
}

void BM_TransportLp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = cloud(n, 1), b = cloud(n, 2);
  ot::LpOptions o;
  o.pricing = state.range(1) == 0 ? ot::Pricing::kBlock : ot::Pricing::kDantzig;
  for (auto _ : state) benchmark::DoNotOptimize(ot::wasserstein_lp(a, b, o).W);
}
BENCHMARK(BM_TransportLp)->Args({100, 0})->Args({200, 0})->Args({200, 1})->Args({500, 0})
    ->Unit(benchmark::kMillisecond);

void BM_WassersteinDirac(benchmark::State& state) {
  const auto a = cloud(static_cast<std::size_t>(state.range(0)), 3);
  const Eigen::VectorXd ref = Eigen::VectorXd::Zero(7);
  for (auto _ : state) benchmark::DoNotOptimize(ot::wasserstein_dirac(a, ref));
}
BENCHMARK(BM_WassersteinDirac)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
