// Copyright 2026 The bhdimer Authors
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


#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "bhdimer/correlations.hpp"
#include "bhdimer/fluctuations.hpp"
#include "bhdimer/liouvillian.hpp"
#include "bhdimer/meanfield.hpp"

namespace {

bhd::ModelParams params(double omega, double u) {
    bhd::ModelParams p;
    p.omega = omega;
    p.u = u;
    return p;
}

void BM_MeanFieldIntegrate(benchmark::State& state) {
    const auto p = params(1.45, 0.2);
    const double t_end = static_cast<double>(state.range(0));
    for (auto _ : state) {
        auto traj = bhd::integrate_mf(bhd::default_initial_state(), p, t_end);
        benchmark::DoNotOptimize(traj.states.data());
    }
}
BENCHMARK(BM_MeanFieldIntegrate)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_BuildBlock(benchmark::State& state) {
    auto p = params(1.45, 0.2);
    const int n = static_cast<int>(state.range(0));
    p.n_total = n;
    for (auto _ : state) {
        auto block = bhd::build_block(p, n, n);
        benchmark::DoNotOptimize(&block);
    }
}
BENCHMARK(BM_BuildBlock)->Arg(20)->Arg(50)->Unit(benchmark::kMicrosecond);

void BM_BlockSpectrum(benchmark::State& state) {
    auto p = params(1.45, 0.2);
    const int n = static_cast<int>(state.range(0));
    p.n_total = n;
    const auto block = bhd::build_block(p, n, n - 1);
    for (auto _ : state) {
        auto spec = bhd::block_spectrum(block);
        benchmark::DoNotOptimize(spec.eigenvalues.data());
    }
}
BENCHMARK(BM_BlockSpectrum)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_Lyapunov(benchmark::State& state) {
    const auto p = params(1.45, 0.2);
    for (auto _ : state) {
        auto run = bhd::integrate_lyapunov(bhd::default_initial_state(), bhd::Mat4::Identity(), p, 20.0);
        benchmark::DoNotOptimize(&run);
    }
}
BENCHMARK(BM_Lyapunov)->Unit(benchmark::kMillisecond);

void BM_CorrelationReport(benchmark::State& state) {
    const auto p = params(1.45, 0.2);
    const auto run = bhd::integrate_lyapunov(bhd::default_initial_state(), bhd::Mat4::Identity(), p, 5.0);
    const bhd::Mat4 sigma = run.covariances.sigmas.back();
    for (auto _ : state) {
        auto r = bhd::correlation_report(sigma);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_CorrelationReport);

}  // namespace

BENCHMARK_MAIN();
