#include "bench_data.hpp"

#include "coda/regression.hpp"
#include "coda/selection.hpp"

#include <benchmark/benchmark.h>

#include <numeric>

namespace coda::bench {
namespace {

// scoring all J(J-1)/2 PLRs against an empty committed set
void BM_EvaluateAllPlrs(benchmark::State& state) {
    const auto m = lognormal_composition(42, static_cast<int>(state.range(0)));
    const ResponseModel model(m, PartWeights::uniform(m.parts()));
    PartSet all(m.parts());
    std::iota(all.begin(), all.end(), 0);
    const auto candidates = all_plrs(all, m.parts());
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_candidates(model, {}, candidates).size());
    state.counters["candidates"] = static_cast<double>(candidates.size());
}
BENCHMARK(BM_EvaluateAllPlrs)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_StepwisePlr(benchmark::State& state) {
    const auto m = lognormal_composition(42, 40);
    const ResponseModel model(m, PartWeights::uniform(m.parts()));
    PartSet all(m.parts());
    std::iota(all.begin(), all.end(), 0);
    const auto candidates = all_plrs(all, m.parts());
    const StepwiseOptions options{static_cast<std::size_t>(state.range(0)), 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(stepwise_select(model, candidates, options).final_pct());
}
BENCHMARK(BM_StepwisePlr)->Arg(1)->Arg(3)->Arg(7)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace coda::bench
