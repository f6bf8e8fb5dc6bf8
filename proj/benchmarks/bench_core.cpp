#include <benchmark/benchmark.h>

#include <vector>

#include "grushin/grid.hpp"
#include "grushin/operator.hpp"
#include "grushin/pipeline.hpp"
#include "grushin/solver.hpp"
#include "grushin/spectral.hpp"

namespace {

using namespace grushin;

GridPtr square(int n) {
    DomainSpec spec;
    spec.m = 1;
    spec.k = 1;
    spec.gamma = 1.0;
    spec.extents = {{0.0, 1.0}, {0.0, 1.0}};
    spec.nodes = {n, n};
    return build_grid(spec);
}

GridPtr cube(int n) {
    DomainSpec spec;
    spec.m = 1;
    spec.k = 2;
    spec.gamma = 1.0;
    spec.extents = {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}};
    spec.nodes = {n, n, n};
    return build_grid(spec);
}

void BM_assemble_2d(benchmark::State& state) {
    const GridPtr grid = square(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(assemble(*grid));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid->total));
}
BENCHMARK(BM_assemble_2d)->Arg(31)->Arg(63)->Arg(127);

void BM_assemble_3d(benchmark::State& state) {
    const GridPtr grid = cube(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(assemble(*grid));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid->total));
}
BENCHMARK(BM_assemble_3d)->Arg(15)->Arg(23);

void BM_apply(benchmark::State& state) {
    const GridPtr grid = square(static_cast<int>(state.range(0)));
    const SparseOperator op = assemble(*grid);
    const std::vector<double> x(grid->total, 1.0);
    std::vector<double> y;
    for (auto _ : state) {
        apply(op, x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(op.val.size()));
}
BENCHMARK(BM_apply)->Arg(31)->Arg(63)->Arg(127);

void BM_grad_energy(benchmark::State& state) {
    const GridPtr grid = square(static_cast<int>(state.range(0)));
    const SparseOperator op = assemble(*grid);
    const Field u = bump_field(grid, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(grad_energy(op, u));
}
BENCHMARK(BM_grad_energy)->Arg(31)->Arg(63)->Arg(127);

void BM_step(benchmark::State& state) {
    const GridPtr grid = square(static_cast<int>(state.range(0)));
    const SparseOperator op = assemble(*grid);
    SolverConfig config;
    config.ell = 2.0;
    config.source = {{PowerTerm{1.0, 3.0}}};
    SolverState start = make_state(config, bump_field(grid, 1.0));
    const double dt = adaptive_dt(start, op, config);
    for (auto _ : state) {
        state.PauseTiming();
        SolverState fresh = start;
        state.ResumeTiming();
        step(fresh, op, config, dt);
        benchmark::DoNotOptimize(fresh.mass);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid->total));
}
BENCHMARK(BM_step)->Arg(31)->Arg(63)->Arg(127);

void BM_small_eigensolve(benchmark::State& state) {
    const GridPtr grid = square(static_cast<int>(state.range(0)));
    const SparseOperator op = assemble(*grid);
    EigenOptions opts;
    opts.tol = 1e-10;
    for (auto _ : state) {
        const EigenResult r = smallest_eigenvalue(op, grid, opts);
        benchmark::DoNotOptimize(r.lambda1);
    }
}
BENCHMARK(BM_small_eigensolve)->Arg(15)->Arg(31);

}  // namespace

BENCHMARK_MAIN();
