#include "bench_data.hpp"

#include "coda/regression.hpp"
#include "coda/variance.hpp"

#include <benchmark/benchmark.h>

namespace coda::bench {
namespace {

void total_variance(benchmark::State& state, VarianceMethod method) {
    const auto m = lognormal_composition(42, static_cast<int>(state.range(0)));
    const auto w = PartWeights::uniform(m.parts());
    for (auto _ : state) benchmark::DoNotOptimize(total_logratio_variance(m, w, method).total);
    state.SetComplexityN(state.range(0));
}

void BM_TotalVariancePairs(benchmark::State& state) { total_variance(state, VarianceMethod::Pairs); }
void BM_TotalVarianceClr(benchmark::State& state) { total_variance(state, VarianceMethod::Clr); }
BENCHMARK(BM_TotalVariancePairs)->RangeMultiplier(2)->Range(4, 128)->Complexity();
BENCHMARK(BM_TotalVarianceClr)->RangeMultiplier(2)->Range(4, 128)->Complexity();

// one fit of the 40-part CLRs on a growing set of PLRs
void BM_ExplainedVariance(benchmark::State& state) {
    const auto m = lognormal_composition(42, 40);
    const auto w = PartWeights::uniform(m.parts());
    std::vector<LogratioSpec> preds;
    for (std::size_t k = 1; k <= static_cast<std::size_t>(state.range(0)); ++k) preds.push_back(make_plr(k, 0, m.parts()));
    for (auto _ : state) benchmark::DoNotOptimize(explained_variance(m, w, preds).explained_fraction);
}
BENCHMARK(BM_ExplainedVariance)->Arg(1)->Arg(7)->Arg(20)->Arg(39);

void BM_ResponseModelFraction(benchmark::State& state) {
    const auto m = lognormal_composition(42, 40);
    const ResponseModel model(m, PartWeights::uniform(m.parts()));
    std::vector<LogratioSpec> preds;
    for (std::size_t k = 1; k <= static_cast<std::size_t>(state.range(0)); ++k) preds.push_back(make_plr(k, 0, m.parts()));
    for (auto _ : state) benchmark::DoNotOptimize(model.explained_fraction(preds));
}
BENCHMARK(BM_ResponseModelFraction)->Arg(1)->Arg(7)->Arg(20)->Arg(39);

}  // namespace
}  // namespace coda::bench
