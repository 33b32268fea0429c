// Copyright 2026 The optqudit Authors
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

#include <array>

#include "optqudit/cv.hpp"
#include "optqudit/fock.hpp"
#include "optqudit/measurement.hpp"
#include "optqudit/protocols.hpp"

using namespace optqudit;
using qudit::QuditDims;

namespace {

void BM_PartialExpSum(benchmark::State &state) {
    const int d = static_cast<int>(state.range(0));
    double x = 1.0;
    for (auto _ : state) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) s += fock::scaled_partial_exp_sum(k, d, x);
        benchmark::DoNotOptimize(s);
        x = x < 200.0 ? x + 1.0 : 1.0;
    }
}
BENCHMARK(BM_PartialExpSum)->Arg(4)->Arg(32);

void BM_CodewordSubspace(benchmark::State &state) {
    const double alpha = static_cast<double>(state.range(0));
    const int n_max = fock::truncation_dim({alpha, 0.0});
    for (auto _ : state) benchmark::DoNotOptimize(cv::codeword_subspace(QuditDims(4), {alpha, 0.0}, n_max));
}
BENCHMARK(BM_CodewordSubspace)->Arg(3)->Arg(5);

void BM_CrossKerrTwoModes(benchmark::State &state) {
    const double alpha = static_cast<double>(state.range(0));
    const int n_max = fock::truncation_dim({alpha, 0.0});
    const auto coh = fock::coherent_state({alpha, 0.0}, n_max);
    const std::array<fock::FockVector, 2> modes{coh, coh};
    const auto product = cv::tensor(modes);
    const auto kerr = cv::KerrPhase::controlled_z(QuditDims(4));
    for (auto _ : state) benchmark::DoNotOptimize(cv::apply_cross_kerr(product, 0, 1, kerr));
}
BENCHMARK(BM_CrossKerrTwoModes)->Arg(3)->Arg(5)->Unit(benchmark::kMicrosecond);

void BM_HeterodyneSamplerSingleMode(benchmark::State &state) {
    const auto coh = fock::coherent_state({5.0, 0.0}, fock::truncation_dim({5.0, 0.0}));
    const auto mm = cv::MultiModeState::single(coh);
    for (auto _ : state) benchmark::DoNotOptimize(measure::HeterodyneSampler(mm, 0));
}
BENCHMARK(BM_HeterodyneSamplerSingleMode)->Unit(benchmark::kMillisecond);

void BM_HeterodyneSamplerBellPair(benchmark::State &state) {
    const auto pair = protocols::cv_bell_pair(QuditDims(4), {5.0, 0.0}, fock::truncation_dim({5.0, 0.0}));
    for (auto _ : state) benchmark::DoNotOptimize(measure::HeterodyneSampler(pair, 0));
}
BENCHMARK(BM_HeterodyneSamplerBellPair)->Unit(benchmark::kMillisecond);

void BM_FullTeleportSubspace(benchmark::State &state) {
    protocols::ProtocolDescriptor desc;
    desc.protocol = protocols::Protocol::full;
    desc.dims = QuditDims(4);
    desc.alpha = {5.0, 0.0};
    desc.engine = Engine::cv;
    desc.model = MeasurementModel::subspace_projective;
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(protocols::run_trials(desc, 1, seed++));
}
BENCHMARK(BM_FullTeleportSubspace)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
