#include <benchmark/benchmark.h>

#include "rwspt/ctmc.hpp"
#include "rwspt/models.hpp"
#include "rwspt/statespace.hpp"

namespace {

rwspt::PLConfig benchConfig() {
    rwspt::PLConfig cfg;
    cfg.lines = 3;
    return cfg;
}

// Shared across thread-count args so the chain is built once.
const rwspt::LumpedCTMC& benchChain() {
    static const rwspt::LumpedCTMC chain = [] {
        const rwspt::PLConfig cfg = benchConfig();
        return rwspt::buildQuotient(rwspt::buildNPLsys(cfg), rwspt::degradationRules(cfg)).chain;
    }();
    return chain;
}

void BM_QuotientBuild(benchmark::State& state) {
    const rwspt::PLConfig cfg = benchConfig();
    const rwspt::System s0 = rwspt::buildNPLsys(cfg);
    const std::vector<rwspt::Rule> rules = rwspt::degradationRules(cfg);
    rwspt::ExploreOptions opt;
    opt.threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const rwspt::QuotientResult q = rwspt::buildQuotient(s0, rules, opt);
        benchmark::DoNotOptimize(q.ts.states.size());
    }
}
BENCHMARK(BM_QuotientBuild)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_TransientSpmv(benchmark::State& state) {
    const rwspt::LumpedCTMC& chain = benchChain();
    const std::vector<double> grid = rwspt::timeGrid(1.0, 5000.0, 20, /*geometric=*/true);
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const rwspt::TransientResult r = rwspt::transient(chain, grid, 1e-10, threads);
        benchmark::DoNotOptimize(r.distributions.back()[0]);
    }
}
BENCHMARK(BM_TransientSpmv)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
