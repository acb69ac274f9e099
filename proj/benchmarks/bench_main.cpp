#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pwaves/greens.hpp"
#include "pwaves/kernel.hpp"
#include "pwaves/ode.hpp"
#include "pwaves/spectra.hpp"
#include "pwaves/wave.hpp"

using namespace pwaves;

namespace {

const KernelMode& mode005() {
    static const KernelMode m = assemble_kernel_mode(0.05);
    return m;
}

void BM_FrobeniusPair(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(frobenius_pair(0.513, 0.95));
}
BENCHMARK(BM_FrobeniusPair);

void BM_ModeSolution(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(solve_mode_ode(Side::right, n, 0.05, 0.513));
}
BENCHMARK(BM_ModeSolution)->Arg(1)->Arg(5)->Arg(10);

void BM_Determinant(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(determinant(1, 0.05, 0.513));
}
BENCHMARK(BM_Determinant);

void BM_SolveMuTilde(benchmark::State& st) {
    const double eps = st.range(0) / 1000.0;
    for (auto _ : st) benchmark::DoNotOptimize(solve_mu_tilde(eps));
}
BENCHMARK(BM_SolveMuTilde)->Arg(100)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_IntegralResidual(benchmark::State& st) {
    const KernelMode& m = mode005();
    for (auto _ : st) benchmark::DoNotOptimize(integral_residual(m, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_IntegralResidual)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_OneDimCheck(benchmark::State& st) {
    const double mt = mode005().mu_tilde_star();
    for (auto _ : st) benchmark::DoNotOptimize(one_dim_check(0.05, mt, 10));
}
BENCHMARK(BM_OneDimCheck)->Unit(benchmark::kMillisecond);

void BM_ChannelPoisson(benchmark::State& st) {
    const int nx = static_cast<int>(st.range(0));
    ColumnSource src;
    src.nx = nx;
    src.omega = [nx](int i, std::span<const double> z, std::span<double> out) {
        const double x = 2.0 * std::numbers::pi * i / nx;
        for (std::size_t k = 0; k < z.size(); ++k) out[k] = std::sin(3.0 * z[k]) * std::cos(x) - 2.0 * z[k];
    };
    std::vector<double> y;
    for (int j = 0; j <= 2 * nx; ++j) y.push_back(j / (2.0 * nx));
    for (auto _ : st) benchmark::DoNotOptimize(solve_channel_poisson(src, y));
}
BENCHMARK(BM_ChannelPoisson)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_NonlinearResidual(benchmark::State& st) {
    ResidualOptions o;
    o.nx = static_cast<int>(st.range(0));
    o.ny = 2 * o.nx + 1;
    for (auto _ : st) benchmark::DoNotOptimize(nonlinear_residual(mode005(), 1e-2, o));
}
BENCHMARK(BM_NonlinearResidual)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_SobolevDistance(benchmark::State& st) {
    const WaveField w = push_forward_vorticity(mode005(), 0.05, 16, 3);
    SobolevOptions o;
    o.cells = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(sobolev_distance(w, 1.4, o));
}
BENCHMARK(BM_SobolevDistance)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
