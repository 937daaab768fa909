// Serial reference vs OpenMP for the two parallel kernels.

#include <benchmark/benchmark.h>

#include "pathint/oracles.hpp"
#include "pathint/pricing.hpp"

using namespace pathint;

namespace {

const MappedModel kBk{0.1, 0.0, 1.0, 0.05, RateMap::exponential()};
const PriceQuery kQ{0.05, 0.0, 5.0};

Execution mode(const benchmark::State& st) { return st.range(0) ? Execution::parallel : Execution::serial; }

void BM_monte_carlo(benchmark::State& st) {
    const McConfig c{100000, 100, 20160817, true};
    const McRunOptions run{mode(st), 0};
    for (auto _ : st) benchmark::DoNotOptimize(mc_price(kBk, kQ, c, run).price);
    st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(c.n_paths));
}

void BM_endpoint_nodes(benchmark::State& st) {
    SemiclassicalOptions o;
    o.execution = mode(st);
    o.quad_rel_tol = 1e-10;
    for (auto _ : st) benchmark::DoNotOptimize(price_semiclassical(kBk, kQ, o).price);
}

}  // namespace

BENCHMARK(BM_monte_carlo)->ArgName("omp")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_endpoint_nodes)->ArgName("omp")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
