#include <benchmark/benchmark.h>

#include "ddae/builtin_models.hpp"
#include "ddae/dde_scalar.hpp"
#include "ddae/linear_model.hpp"
#include "ddae/pencil.hpp"
#include "ddae/spectrum.hpp"
#include "ddae/theta_integrator.hpp"
#include "ddae/theta_match.hpp"

namespace {

ddae::LinearDelayModel chain_model(double h) {
    const auto m = ddae::multi_delay_chain({{"beta", 1.01}});
    return ddae::linearize(m.system, ddae::find_equilibrium(m.system, m.equilibrium), h);
}

void BM_StabilityRaster(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ddae::RasterBounds bounds{-5.0, 5.0, -5.0, 5.0, n, n};
    const auto rule = ddae::ScanRule::preset("b-eq-a");
    for (auto _ : state) {
        benchmark::DoNotOptimize(ddae::stability_raster(bounds, 0.5, rule, 1, 1));
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_StabilityRaster)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_DeformedSpectrum(benchmark::State& state) {
    const double h = 0.1 / static_cast<double>(state.range(0));
    const auto model = chain_model(h);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ddae::deformed_spectrum(ddae::build_discrete_pencil(model, ddae::ThetaParams(0.5, h))));
    }
    state.counters["dim"] = (model.r() + 1) * model.dim();
}
BENCHMARK(BM_DeformedSpectrum)->Arg(5)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_ExactSpectrum(benchmark::State& state) {
    const auto model = chain_model(0.02);
    ddae::ExactSpectrumOptions opt;
    opt.N = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ddae::exact_spectrum(model, opt));
    }
}
BENCHMARK(BM_ExactSpectrum)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_SimulateChain(benchmark::State& state) {
    const auto m = ddae::multi_delay_chain({{"beta", 1.01}});
    for (auto _ : state) {
        benchmark::DoNotOptimize(ddae::simulate(m.system, ddae::ThetaParams(0.5, 0.02), 20.0));
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SimulateChain)->Unit(benchmark::kMillisecond);

void BM_ThetaMatch(benchmark::State& state) {
    const double h = 0.02;
    const auto model = chain_model(h);
    const auto exact = ddae::exact_spectrum(chain_model(h));
    ddae::Complex target = exact.roots.front();
    for (const auto& s : exact.roots) {
        if (s.imag() > 0.0) {
            target = s;
            break;
        }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(ddae::theta_match(model, target, h));
    }
}
BENCHMARK(BM_ThetaMatch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
