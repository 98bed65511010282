#include <benchmark/benchmark.h>

#include "gcm/bounds.hpp"
#include "gcm/interp.hpp"
#include "gcm/lattices.hpp"
#include "gcm/specfun.hpp"

using namespace gcm;

static void BM_BesselJ_Miller(benchmark::State& state) {
    double nu = double(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(specfun::bessel_j(nu, 1.2 * nu));
}
BENCHMARK(BM_BesselJ_Miller)->Arg(25)->Arg(100)->Arg(250);

static void BM_BesselZeros(benchmark::State& state) {
    double nu = double(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(specfun::bessel_zeros(nu, 64));
}
BENCHMARK(BM_BesselZeros)->Arg(4)->Arg(50)->Arg(250);

static void BM_MainLowerBound(benchmark::State& state) {
    auto p = bounds::make_params(int(state.range(0)), bounds::kPi, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(bounds::main_lower_bound(p));
}
BENCHMARK(BM_MainLowerBound)->Arg(8)->Arg(100)->Arg(500);

static void BM_BuildAux(benchmark::State& state) {
    auto p = bounds::make_params(2, bounds::kPi, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(interp::build_aux(p, int(state.range(0)),
                                                   interp::Precision::extended));
}
BENCHMARK(BM_BuildAux)->Arg(60)->Arg(120)->Arg(240);

static void BM_LpBoundViaAux(benchmark::State& state) {
    auto p = bounds::make_params(2, bounds::kPi, 1.0);
    auto h = interp::build_aux(p, 160, interp::Precision::extended);
    for (auto _ : state) benchmark::DoNotOptimize(interp::lp_bound_via_aux(h, 1e-4));
}
BENCHMARK(BM_LpBoundViaAux);

static void BM_LatticeEnergyLeech(benchmark::State& state) {
    auto model = lattices::make_lattice(lattices::LatticeName::Leech);
    for (auto _ : state)
        benchmark::DoNotOptimize(lattices::lattice_energy(model, bounds::kPi, 1.0));
}
BENCHMARK(BM_LatticeEnergyLeech);

static void BM_RegGammaUpper(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(specfun::reg_gamma_upper(32.0, 61.06));
}
BENCHMARK(BM_RegGammaUpper);

BENCHMARK_MAIN();
