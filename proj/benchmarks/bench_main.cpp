#include <benchmark/benchmark.h>

#include "ri1d/adversarial_constructor.hpp"
#include "ri1d/evolution_integrator.hpp"
#include "ri1d/hypothesis_checker.hpp"
#include "ri1d/incremental_solver.hpp"
#include "ri1d/regularity_analyzer.hpp"

using namespace ri1d;

static void BM_EvalJet(benchmark::State& st) {
    const EnergyModel m = double_well_model();
    double t = 0.3;
    for (auto _ : st) {
        benchmark::DoNotOptimize(m.eval_jet(t, 0.7));
        t = t < 1.9 ? t + 1e-6 : 0.3;
    }
}
BENCHMARK(BM_EvalJet);

static void BM_ConstructedJet(benchmark::State& st) {
    const EnergyModel m = build_energy(build_sign_field(cantor_driver(int(st.range(0)))), 0.0);
    double t = 0.1;
    for (auto _ : st) {
        benchmark::DoNotOptimize(m.eval_jet(t, 0.4));
        t = t < 0.9 ? t + 1e-4 : 0.1;
    }
}
BENCHMARK(BM_ConstructedJet)->Arg(3)->Arg(5)->Arg(7);

static void BM_SolveEnergetic(benchmark::State& st) {
    const EnergyModel m = double_well_model();
    const auto grid = uniform_grid(0, 2, std::size_t(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(solve_energetic(m, -1.0, grid, m.domain().x, 1e-3));
}
BENCHMARK(BM_SolveEnergetic)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_SolveLocal(benchmark::State& st) {
    const EnergyModel m = double_well_model();
    for (auto _ : st) benchmark::DoNotOptimize(solve_local(m, -1.0, 2.0, 1.0 / double(st.range(0))));
}
BENCHMARK(BM_SolveLocal)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_CheckHypothesis(benchmark::State& st) {
    const EnergyModel m = double_well_model();
    for (auto _ : st)
        benchmark::DoNotOptimize(check_hypothesis(m, Hypothesis::H5, {{0, 2}, {-2, 2}}, int(st.range(0))));
}
BENCHMARK(BM_CheckHypothesis)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_Classify(benchmark::State& st) {
    const EnergyModel m = double_well_model();
    const Trajectory tr = solve_local(m, -1.0, 2.0, 1e-3).trajectory;
    const auto js = detect_jumps(tr, default_jump_threshold(tr));
    for (auto _ : st) benchmark::DoNotOptimize(classify_points(m, tr, js, 1e-4));
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);

static void BM_VerifyEnergetic(benchmark::State& st) {
    const MonotoneDriver u = cantor_driver(int(st.range(0)));
    const EnergyModel m = build_energy(build_sign_field(u), 0.0);
    for (auto _ : st) benchmark::DoNotOptimize(verify_energetic(m, u, 0.0));
}
BENCHMARK(BM_VerifyEnergetic)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond)->Iterations(2);
BENCHMARK_MAIN();
