#include <benchmark/benchmark.h>

#include <random>

#include "tbwsim/harness.hpp"

using namespace tbwsim;

static void BM_StateDerivative(benchmark::State& state) {
    const AeroModel m = AeroModel::chaka50();
    const TrimPoint tp = solve_trim(m, 160.0, 100.0);
    const AircraftState s = trim_state(tp);
    const ControlInputs in{tp.delta_E, tp.thrust};
    const WindState still;
    for (auto _ : state) {
        benchmark::DoNotOptimize(state_derivative(s, in, m, still, 0.0));
    }
}
BENCHMARK(BM_StateDerivative);

static void BM_IntegrateStep(benchmark::State& state) {
    const AeroModel m = AeroModel::chaka50();
    const TrimPoint tp = solve_trim(m, 160.0, 100.0);
    AircraftState s = trim_state(tp);
    const ControlInputs in{tp.delta_E, tp.thrust};
    const WindState still;
    for (auto _ : state) {
        s = integrate_step(s, in, m, still, 0.01);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_IntegrateStep);

static void BM_SolveTrim(benchmark::State& state) {
    const AeroModel m = AeroModel::chaka50();
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_trim(m, 160.0, 100.0));
    }
}
BENCHMARK(BM_SolveTrim);

static void BM_DrydenStep(benchmark::State& state) {
    WindState wind;
    const DrydenParams p = dryden_scales(100.0, 7.7, 160.0);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> unit(0.0, 1.0);
    for (auto _ : state) {
        dryden_step(wind, p, Vec3(unit(rng), unit(rng), unit(rng)), 0.01);
        benchmark::DoNotOptimize(wind.W);
    }
}
BENCHMARK(BM_DrydenStep);

static void BM_FaaAction(benchmark::State& state) {
    const StateGrid grid = RLParams{}.make_grid();
    const ActionSet actions = ActionSet::standard();
    QTable Q = QTable::zeros(grid, actions);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> val(-1e4, 1e4);
    for (auto& v : Q.values) v = val(rng);
    const Window w = faa_window(0.003, -0.004, grid, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(faa_action(Q, 0.003, -0.004, grid, actions, w));
    }
}
BENCHMARK(BM_FaaAction);

static void BM_FqlUpdateFaa(benchmark::State& state) {
    const StateGrid grid = RLParams{}.make_grid();
    const ActionSet actions = ActionSet::standard();
    QTable Q = QTable::zeros(grid, actions);
    for (auto _ : state) {
        fql_update_faa(Q, 0.003, -0.004, 1.0, 0.002, -0.003, 0.02, 0.99, grid, actions, 2);
        benchmark::DoNotOptimize(Q.values[0]);
    }
}
BENCHMARK(BM_FqlUpdateFaa);

static void BM_TrainingEpisode(benchmark::State& state) {
    LearningSchedule sched;
    sched.episodes = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(train(ControllerKind::FQL, sched, 1, TrainEnv{}));
    }
}
BENCHMARK(BM_TrainingEpisode)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
