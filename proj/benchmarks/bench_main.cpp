#include <benchmark/benchmark.h>

#include "epenc/complextime.hpp"
#include "epenc/perturbation.hpp"
#include "epenc/propagator.hpp"
#include "epenc/sweep.hpp"

using namespace epenc;

namespace {

PulseParams pulse(double ratio, double alpha, double phi)
{
    const auto sys = helium_preset();
    return PulseParams::with_area(sys, ratio * cw_exceptional_point(sys).eps0_ep, alpha, phi);
}

}  // namespace

static void BM_PropagateDiabatic(benchmark::State& state)
{
    const auto sys = helium_preset();
    const auto p = pulse(8.0, 1.0, double(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(survival_probability(sys, p));
}
BENCHMARK(BM_PropagateDiabatic)->Arg(10)->Arg(30)->Arg(100);

static void BM_PropagateAdiabatic(benchmark::State& state)
{
    const auto sys = helium_preset();
    const auto p = pulse(8.0, 1.0, 30.0);
    for (auto _ : state) benchmark::DoNotOptimize(propagate_adiabatic(sys, p));
}
BENCHMARK(BM_PropagateAdiabatic);

static void BM_FirstOrderAmplitude(benchmark::State& state)
{
    const auto sys = helium_preset();
    const auto p = pulse(8.0, 1.0, double(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(a_plus_first_order(sys, p));
}
BENCHMARK(BM_FirstOrderAmplitude)->Arg(10)->Arg(30)->Arg(100);

static void BM_FindDynamicalEPs(benchmark::State& state)
{
    const auto shape = ContourShape::from_ratio(helium_preset(), 8.0, 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(find_dynamical_eps(shape));
}
BENCHMARK(BM_FindDynamicalEPs);

static void BM_AttachSigmas(benchmark::State& state)
{
    const auto shape = ContourShape::from_ratio(helium_preset(), 8.0, 2.0);
    const auto base = find_dynamical_eps(shape);
    for (auto _ : state) {
        auto rep = base;
        attach_sigmas(shape, rep);
        benchmark::DoNotOptimize(rep);
    }
}
BENCHMARK(BM_AttachSigmas);

static void BM_Separatrix(benchmark::State& state)
{
    const auto sys = helium_preset();
    for (auto _ : state) benchmark::DoNotOptimize(find_separatrix(sys, {2.0}, 3.0 * kPi));
}
BENCHMARK(BM_Separatrix)->Unit(benchmark::kMillisecond);

static void BM_Sweep(benchmark::State& state)
{
    SweepSpec spec;
    spec.eps_ratio = {0.0, 16.0, int(state.range(0))};
    spec.alpha = {0.0, 2.0, int(state.range(0))};
    spec.mode = SweepMode::Both;
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_Sweep)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
