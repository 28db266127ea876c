// Serial vs OpenMP throughput of the two data-parallel kernels: the
// replication engine and the rectangle-bound grids. Both paths produce
// bit-identical results (fixed block partitioning, ordered merge); this
// target only compares speed.

#include <benchmark/benchmark.h>

#include "tailsum/bounds.hpp"
#include "tailsum/estimators.hpp"
#include "tailsum/presets.hpp"

namespace {

using namespace tailsum;

TailProblem survival_problem(int n, double tau, double s) {
    std::vector<MarginalPtr> marginals(n, std::make_shared<ParetoMarginal>(2.5));
    return TailProblem(Mode::survival_y,
                       ArchimedeanGenerator(Family::clayton, tau_to_param(Family::clayton, tau)),
                       std::move(marginals), s);
}

void BM_replication_nr2(benchmark::State& state) {
    const int workers = static_cast<int>(state.range(0));
    const auto p = survival_problem(5, 0.5, 200.0);
    for (auto _ : state) {
        auto rep = run_replications(p, EstimatorKind::nr2, {}, 20000, 42, workers);
        benchmark::DoNotOptimize(rep.mean);
    }
}

void BM_replication_nr1(benchmark::State& state) {
    const int workers = static_cast<int>(state.range(0));
    const auto p = survival_problem(5, 0.5, 200.0);
    for (auto _ : state) {
        auto rep = run_replications(p, EstimatorKind::nr1, {}, 5000, 42, workers);
        benchmark::DoNotOptimize(rep.mean);
    }
}

void BM_bounds_n2(benchmark::State& state) {
    const int workers = static_cast<int>(state.range(0));
    const auto p = survival_problem(2, 0.5, 100.0);
    BoundsOptions opts;
    opts.workers = workers;
    for (auto _ : state) {
        auto b = bounds_tail(p, 18, opts);
        benchmark::DoNotOptimize(b.lower);
    }
}

void BM_bounds_n3(benchmark::State& state) {
    const int workers = static_cast<int>(state.range(0));
    const auto p = survival_problem(3, 0.5, 100.0);
    BoundsOptions opts;
    opts.workers = workers;
    for (auto _ : state) {
        auto b = bounds_tail(p, 6, opts);
        benchmark::DoNotOptimize(b.lower);
    }
}

}  // namespace

// range(0): worker count; 1 is the serial reference kernel.
BENCHMARK(BM_replication_nr2)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_replication_nr1)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bounds_n2)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bounds_n3)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
