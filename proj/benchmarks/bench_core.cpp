#include <benchmark/benchmark.h>

#include <random>

#include "muxrule/eval.hpp"
#include "muxrule/graph_io.hpp"
#include "muxrule/matcher.hpp"
#include "muxrule/miner.hpp"
#include "muxrule/predictor.hpp"
#include "muxrule/rules.hpp"
#include "muxrule/synth.hpp"

using namespace muxrule;

namespace {

const MultiplexGraph& aarhus() {
    static const MultiplexGraph g = [] {
        LoadOptions lo;
        lo.directed = false;
        return load_graph(std::string(MUXRULE_DATA_DIR) + "/aarhus_cs.edges", std::nullopt, lo);
    }();
    return g;
}

const std::vector<Pattern>& aarhus_patterns() {
    static const std::vector<Pattern> p = [] {
        MinerConfig cfg;
        cfg.min_support = default_min_support(aarhus());
        return mine(aarhus(), cfg).patterns;
    }();
    return p;
}

const std::vector<Rule>& aarhus_rules() {
    static const std::vector<Rule> r = build_rules(aarhus_patterns(), aarhus());
    return r;
}

} // namespace

static void BM_MineAarhus(benchmark::State& state) {
    MinerConfig cfg;
    cfg.min_support = default_min_support(aarhus());
    cfg.max_nodes = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(mine(aarhus(), cfg).patterns.size());
}
BENCHMARK(BM_MineAarhus)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_MineSynthetic(benchmark::State& state) {
    SynthConfig sc;
    sc.community_size = 25;
    sc.p_in = 0.2;
    sc.p_out = 0.005;
    const auto g = generate(sc);
    MinerConfig cfg;
    cfg.min_support = default_min_support(g);
    for (auto _ : state) benchmark::DoNotOptimize(mine(g, cfg).patterns.size());
}
BENCHMARK(BM_MineSynthetic)->Unit(benchmark::kMillisecond);

static void BM_CountSupport(benchmark::State& state) {
    const auto& ps = aarhus_patterns();
    std::vector<const Pattern*> big;
    for (const auto& p : ps)
        if (p.node_count() == 4) big.push_back(&p);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_support(*big[i % big.size()], aarhus()));
        ++i;
    }
}
BENCHMARK(BM_CountSupport)->Unit(benchmark::kMicrosecond);

static void BM_BuildRules(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(build_rules(aarhus_patterns(), aarhus()).size());
}
BENCHMARK(BM_BuildRules)->Unit(benchmark::kMillisecond);

static void BM_ScoreLinks(benchmark::State& state) {
    const auto& rules = aarhus_rules();
    for (auto _ : state) benchmark::DoNotOptimize(score_links(aarhus(), rules, {}).size());
}
BENCHMARK(BM_ScoreLinks)->Unit(benchmark::kMillisecond);

static void BM_Auc(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> pos(static_cast<std::size_t>(state.range(0)) / 10), neg(static_cast<std::size_t>(state.range(0)));
    for (auto& x : pos) x = u(rng) + 0.2;
    for (auto& x : neg) x = u(rng);
    for (auto _ : state) benchmark::DoNotOptimize(auc_from_scores(pos, neg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Auc)->Arg(10000)->Arg(1000000);

BENCHMARK_MAIN();
