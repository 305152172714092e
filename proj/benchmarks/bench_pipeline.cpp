// Copyright 2026 The mimsi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "mimsi/cluster.hpp"
#include "mimsi/conditioner.hpp"
#include "mimsi/decomposer.hpp"
#include "mimsi/expressibility.hpp"
#include "mimsi/haar_stats.hpp"

using namespace mimsi;

namespace {

ClusterConfig source(std::size_t m) {
    ClusterConfig c;
    c.m_bins = m;
    c.delays = {1, 8};
    c.squeeze_a_db = 2.3;
    c.squeeze_b_db = 3.0;
    return c;
}

std::vector<double> thetas(std::size_t n, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> ang(-1.5, 1.5);
    std::vector<double> t(n);
    for (double &x : t) {
        x = ang(rng);
    }
    return t;
}

void BM_BuildCluster(benchmark::State &st) {
    auto cfg = source(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) {
        benchmark::DoNotOptimize(build_cluster(cfg));
    }
}
BENCHMARK(BM_BuildCluster)->Arg(24)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_ApplyLinearPlan(benchmark::State &st) {
    auto m = static_cast<std::size_t>(st.range(0));
    GaussianState s = build_cluster(source(m));
    MeasurementPlan plan = linear_plan(m, thetas(m, 1));
    for (auto _ : st) {
        benchmark::DoNotOptimize(apply_plan(s, plan));
    }
}
BENCHMARK(BM_ApplyLinearPlan)->Arg(24)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_EffectiveCircuit(benchmark::State &st) {
    auto m = static_cast<std::size_t>(st.range(0));
    GaussianState s = apply_plan(build_cluster(source(m)), linear_plan(m, thetas(m, 2)));
    for (auto _ : st) {
        benchmark::DoNotOptimize(effective_circuit(s));
    }
}
BENCHMARK(BM_EffectiveCircuit)->Arg(24)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_SampleHaar(benchmark::State &st) {
    Rng rng = make_rng(3);
    auto n = static_cast<std::size_t>(st.range(0));
    for (auto _ : st) {
        benchmark::DoNotOptimize(sample_haar_passive(n, rng));
    }
}
BENCHMARK(BM_SampleHaar)->Arg(2)->Arg(6)->Arg(100);

void BM_CompareToHaar(benchmark::State &st) {
    Rng rng = make_rng(4);
    PassiveUnitary u = sample_haar_passive(static_cast<std::size_t>(st.range(0)), rng);
    for (auto _ : st) {
        benchmark::DoNotOptimize(compare_to_haar(u.mat(), 60, rng, 0));
    }
}
BENCHMARK(BM_CompareToHaar)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_EstimateDeviation(benchmark::State &st) {
    ClusterConfig c;
    c.m_bins = 2;
    c.delays = {1};
    c.squeeze_a_db = r_to_db(1.0);
    c.squeeze_b_db = r_to_db(1.0);
    DeviationSettings s;
    s.n_pairs = static_cast<std::size_t>(st.range(0));
    s.n_rtest = 10;
    s.orders = {1};
    s.seed = 5;
    for (auto _ : st) {
        benchmark::DoNotOptimize(estimate_deviation(c, Strategy{}, s));
    }
}
BENCHMARK(BM_EstimateDeviation)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
