#include <benchmark/benchmark.h>

#include "magnoblock/expm.hpp"
#include "magnoblock/radau.hpp"
#include "magnoblock/steady.hpp"
#include "magnoblock/sweep.hpp"

using namespace magnoblock;

namespace {

// x = (omega0 - omega_c) / omega_mech
SystemParams optimal_at(double x, double omega_m_ratio = 1.0) {
    SystemParams p = SystemParams::defaults();
    p.omega_m = omega_m_ratio * p.omega_c;
    p.omega_drive = AngularFrequency::from_hz(p.omega_c.hz() + x * p.omega_mech.hz());
    const OptimalDrive opt = optimal_drive(p);
    p.phi = opt.phi_star;
    p.drive_E = AngularFrequency::from_rad_per_s(opt.e_star);
    return p;
}

void BM_BuildGenerator(benchmark::State& state) {
    const SystemParams p = optimal_at(-1.0);
    for (auto _ : state) benchmark::DoNotOptimize(build_generator(p));
}
BENCHMARK(BM_BuildGenerator);

void BM_RadauEvolve(benchmark::State& state) {
    const SystemParams p = optimal_at(-1.0, static_cast<double>(state.range(0)));
    const Generator g = build_generator(p);
    const double t = default_horizon(p);
    std::size_t steps = 0;
    for (auto _ : state) {
        const Trajectory tr = radau_evolve(g, StateVector::vacuum(), t, RadauConfig{}, t / kDefaultSamples);
        steps = tr.step_stats.accepted;
        benchmark::DoNotOptimize(tr.states.back());
    }
    state.counters["steps"] = static_cast<double>(steps);
}
BENCHMARK(BM_RadauEvolve)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ExpmPropagate(benchmark::State& state) {
    const SystemParams p = optimal_at(-1.0);
    const Generator g = build_generator(p);
    const double t = default_horizon(p);
    for (auto _ : state) benchmark::DoNotOptimize(expm_propagate(g, StateVector::vacuum(), t));
}
BENCHMARK(BM_ExpmPropagate)->Unit(benchmark::kMicrosecond);

void BM_SteadyAmplitudes(benchmark::State& state) {
    const SystemParams p = optimal_at(-1.0);
    const Detunings d = compute_detunings(p);
    for (auto _ : state) benchmark::DoNotOptimize(steady_amplitudes(p, d));
}
BENCHMARK(BM_SteadyAmplitudes);

void BM_SweepPoint(benchmark::State& state) {
    SweepSpec s;
    s.omega0_grid = {AngularFrequency::from_hz(s.base.omega_c.hz() - s.base.omega_mech.hz())};
    for (auto _ : state) benchmark::DoNotOptimize(sweep_1d(s));
}
BENCHMARK(BM_SweepPoint)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
