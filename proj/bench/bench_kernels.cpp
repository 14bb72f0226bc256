// SPDX-License-Identifier: Apache-2.0

#include "isac/channel_model.hpp"
#include "isac/kernels.hpp"
#include "isac/rng.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace isac;

std::vector<CMatrix> make_frames(int count, int rx, int probes) {
    CounterRng rng(7);
    std::vector<CMatrix> frames;
    for (int i = 0; i < count; ++i) frames.push_back(rng.complex_gaussian_matrix(rx, probes));
    return frames;
}

template <bool Parallel>
void BM_CorrelationEnergy(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto frames = make_frames(512, n, n);
    const CMatrix rx = build_dictionary(ArrayGeometry(n), 2 * n).matrix;
    const CMatrix tx = rx;
    const RVector w = RVector::Ones(tx.cols());
    for (auto _ : state) {
        RMatrix e = Parallel ? kernels::parallel::correlation_energy(frames, rx, tx, w)
                             : kernels::serial::correlation_energy(frames, rx, tx, w);
        benchmark::DoNotOptimize(e.data());
    }
}

template <bool Parallel>
void BM_DftRows(benchmark::State& state) {
    const auto len = state.range(0);
    CounterRng rng(11);
    const CMatrix x = rng.complex_gaussian_matrix(64, len);
    for (auto _ : state) {
        CMatrix y = Parallel ? kernels::parallel::dft_rows(x, kernels::DftSign::Forward)
                             : kernels::serial::dft_rows(x, kernels::DftSign::Forward);
        benchmark::DoNotOptimize(y.data());
    }
}

template <bool Parallel>
void BM_MinRotation(benchmark::State& state) {
    CounterRng rng(13);
    const CMatrix hc = rng.complex_gaussian_matrix(2, 4);
    const CMatrix c = rng.complex_gaussian_matrix(2, 6);
    const CMatrix factor = rng.complex_gaussian_matrix(4, 4);
    const kernels::RotationScan scan{&hc, &c, &factor, 17, static_cast<int>(state.range(0))};
    for (auto _ : state) {
        double v = Parallel ? kernels::parallel::min_rotation_objective(scan)
                            : kernels::serial::min_rotation_objective(scan);
        benchmark::DoNotOptimize(v);
    }
}

}  // namespace

BENCHMARK(BM_CorrelationEnergy<false>)->Name("correlation_energy/serial")->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(BM_CorrelationEnergy<true>)->Name("correlation_energy/parallel")->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(BM_DftRows<false>)->Name("dft_rows/serial")->Arg(16)->Arg(64);
BENCHMARK(BM_DftRows<true>)->Name("dft_rows/parallel")->Arg(16)->Arg(64);
BENCHMARK(BM_MinRotation<false>)->Name("min_rotation/serial")->Arg(1000);
BENCHMARK(BM_MinRotation<true>)->Name("min_rotation/parallel")->Arg(1000);

BENCHMARK_MAIN();
