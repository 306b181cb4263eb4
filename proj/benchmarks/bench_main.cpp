#include <benchmark/benchmark.h>

#include "rdcauchy/bvp.hpp"
#include "rdcauchy/iterate.hpp"
#include "rdcauchy/spectral.hpp"
#include "rdcauchy/synthesis.hpp"

using namespace rdcauchy;

namespace {

struct Strip {
    DomainSpec domain;
    Grid grid;
    BoundaryIndexMap map;
    explicit Strip(int nx, double A = 4.0, double L = 0.4)
        : domain{A, L, -1.0, 1.0}, grid(build_grid(domain, nx)), map(classify_boundary(grid, domain)) {}
};

void BM_Factorize(benchmark::State& state) {
    const Strip s(static_cast<int>(state.range(0)));
    const OperatorMatrix m = assemble(s.grid, s.map, ProblemParams{5, 2, 2}, BcSpec::problem_a());
    for (auto _ : state) benchmark::DoNotOptimize(factorize(m));
    state.counters["unknowns"] = static_cast<double>(m.size());
}
BENCHMARK(BM_Factorize)->Arg(201)->Arg(401)->Arg(801)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
    const Strip s(static_cast<int>(state.range(0)));
    const Factorization f = factorize(assemble(s.grid, s.map, ProblemParams{5, 2, 2}, BcSpec::problem_a()));
    std::vector<double> b(f.size(), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(f.solve(b));
}
BENCHMARK(BM_Solve)->Arg(201)->Arg(401)->Arg(801)->Unit(benchmark::kMillisecond);

void BM_IterationStep(benchmark::State& state) {
    const Strip s(static_cast<int>(state.range(0)));
    const SynthesizedData d = synthesize_cauchy(s.map, 9.5, {0, 1, 1}, {0, 1, 0.5});
    AlternatingIteration it(s.map, ProblemParams{9.5, 2, 2}, d.cauchy);
    it.set_reference(d.u_ref);
    for (auto _ : state) it.run(1);
}
BENCHMARK(BM_IterationStep)->Arg(401)->Arg(801)->Unit(benchmark::kMillisecond);

void BM_MinFormEigenvalue(benchmark::State& state) {
    const Strip s(801);
    for (auto _ : state) benchmark::DoNotOptimize(min_form_eigenvalue(s.map, 5.0, 2.0, 2.0));
}
BENCHMARK(BM_MinFormEigenvalue)->Unit(benchmark::kMillisecond);

void BM_RobinLambda(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(robin_lambda(4.0, 0.4));
}
BENCHMARK(BM_RobinLambda);

}  // namespace
BENCHMARK_MAIN();
