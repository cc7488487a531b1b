// Copyright 2026 The noonlab Authors
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

// OpenMP kernels against their serial references.

#include <numbers>
#include <vector>

#include "benchmark/benchmark.h"
#include "noonlab/fock.hpp"
#include "noonlab/metrology.hpp"
#include "noonlab/projection.hpp"
#include "noonlab/simkit.hpp"

namespace {

using namespace noonlab;

ExperimentConfig bench_config(SimulationMethod method, std::uint64_t pulses) {
    ExperimentConfig cfg;
    for (int i = 0; i < 32; ++i) {
        cfg.phases.push_back(std::numbers::pi * i / 32);
    }
    cfg.pulses_per_point = pulses;
    cfg.pair_prob = 0.02;
    cfg.ea_ratio = 0.49;
    cfg.v2 = 0.88;
    cfg.dark_prob = 1e-5;
    cfg.seed = 7;
    cfg.method = method;
    return cfg;
}

template <bool kParallel>
void BM_SimulateAggregated(benchmark::State &state) {
    const ExperimentConfig cfg = bench_config(SimulationMethod::kAggregated, 1'000'000'000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kParallel ? simulate_counts(cfg) : simulate_counts_serial(cfg));
    }
}

template <bool kParallel>
void BM_SimulatePerPulse(benchmark::State &state) {
    const ExperimentConfig cfg = bench_config(SimulationMethod::kPerPulse, 20'000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kParallel ? simulate_counts(cfg) : simulate_counts_serial(cfg));
    }
}

template <bool kParallel>
void BM_SelfOverlapGrid(benchmark::State &state) {
    const StateVector s = make_pdc_n(static_cast<int>(state.range(0)));
    const std::size_t count = 200'000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kParallel ? self_overlap_grid(s, 0.0, 1e-5, count)
                                           : self_overlap_grid_serial(s, 0.0, 1e-5, count));
    }
}

template <bool kParallel>
void BM_NfoldSweep(benchmark::State &state) {
    const SynthesisResult r = synthesize_network(make_pdc_n(static_cast<int>(state.range(0))));
    const StateVector s = make_pdc_n(static_cast<int>(state.range(0)));
    std::vector<double> phases;
    for (int i = 0; i < 4096; ++i) {
        phases.push_back(std::numbers::pi * i / 4096);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(kParallel ? nfold_sweep(r.network, s, phases)
                                           : nfold_sweep_serial(r.network, s, phases));
    }
}

BENCHMARK(BM_SimulateAggregated<true>)->Name("simulate_aggregated/parallel");
BENCHMARK(BM_SimulateAggregated<false>)->Name("simulate_aggregated/serial");
BENCHMARK(BM_SimulatePerPulse<true>)->Name("simulate_per_pulse/parallel");
BENCHMARK(BM_SimulatePerPulse<false>)->Name("simulate_per_pulse/serial");
BENCHMARK(BM_SelfOverlapGrid<true>)->Name("self_overlap_grid/parallel")->Arg(64)->Arg(256);
BENCHMARK(BM_SelfOverlapGrid<false>)->Name("self_overlap_grid/serial")->Arg(64)->Arg(256);
BENCHMARK(BM_NfoldSweep<true>)->Name("nfold_sweep/parallel")->Arg(4)->Arg(16);
BENCHMARK(BM_NfoldSweep<false>)->Name("nfold_sweep/serial")->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
