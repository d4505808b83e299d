#include <benchmark/benchmark.h>

#include "alfven/evolution.hpp"
#include "alfven/island.hpp"
#include "alfven/spectral.hpp"
#include "alfven/sturmian.hpp"

using namespace alfven;

namespace {

profiles::BackgroundProfile linear() { return {RealPoly{0.0, 0.5}, RealPoly{0.0, 1.0}, 0.4}; }

spectral::InitialData parabola() {
    spectral::InitialData d;
    d.phi0 = ComplexPoly{cplx(1.0), cplx(0.0), cplx(-1.0)};
    return d;
}

void BM_Homogeneous(benchmark::State& state) {
    const auto ext = profiles::extend(linear());
    const auto c = profiles::make_spectral_point(ext, cplx(0.3, 0.2));
    sturmian::SolveOptions opt;
    opt.grid.n_nodes = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sturmian::solve_homogeneous(ext, 1, c, profiles::Side::plus, opt));
}
BENCHMARK(BM_Homogeneous)->Arg(513)->Arg(1025)->Arg(2049)->Unit(benchmark::kMillisecond);

void BM_WronskianBoundary(benchmark::State& state) {
    const auto ext = profiles::extend(linear());
    for (auto _ : state) benchmark::DoNotOptimize(spectral::compute_D(ext, 1, cplx(0.3)));
}
BENCHMARK(BM_WronskianBoundary)->Unit(benchmark::kMillisecond);

void BM_WronskianOffAxis(benchmark::State& state) {
    const auto ext = profiles::extend(linear());
    const double eps = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(spectral::compute_D(ext, 1, cplx(0.0, eps)));
}
BENCHMARK(BM_WronskianOffAxis)->Arg(100)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Theta(benchmark::State& state) {
    const auto ext = profiles::extend(linear());
    const auto src = spectral::make_source(parabola(), 1);
    for (auto _ : state) benchmark::DoNotOptimize(spectral::solve_inhomogeneous(src, ext, cplx(0.3, 0.2)));
}
BENCHMARK(BM_Theta)->Unit(benchmark::kMillisecond);

void BM_IslandProfiles(benchmark::State& state) {
    const auto ext = profiles::extend(linear());
    for (auto _ : state) benchmark::DoNotOptimize(island::limiting_profiles(ext, 1, cplx(1.0)));
}
BENCHMARK(BM_IslandProfiles)->Unit(benchmark::kMillisecond);

void BM_HelmholtzSolve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const evolution::Helmholtz h(1, n);
    std::vector<cplx> rhs(n + 1, cplx(1.0)), out(n + 1);
    for (auto _ : state) {
        h.solve(rhs, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_HelmholtzSolve)->Arg(1024)->Arg(2048)->Arg(8192);

void BM_RK4Step(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const evolution::ModeSystem sys(linear(), 1, n);
    auto s = evolution::make_state(1, n, parabola());
    for (auto _ : state) {
        sys.step(s, sys.dt_max());
        benchmark::DoNotOptimize(s.phi.data());
    }
}
BENCHMARK(BM_RK4Step)->Arg(1024)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
