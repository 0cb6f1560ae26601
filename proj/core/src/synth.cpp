#include "muxrule/synth.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "muxrule/error.hpp"
#include "muxrule/graph_io.hpp"

namespace muxrule {

void validate(const SynthConfig& cfg) {
    if (cfg.layer_sizes.empty()) throw UsageError("at least one layer size is required");
    for (std::size_t i = 0; i < cfg.layer_sizes.size(); ++i) {
        if (cfg.layer_sizes[i] == 0) throw UsageError("layer sizes must be positive");
        if (i > 0 && cfg.layer_sizes[i] > cfg.layer_sizes[i - 1])
            throw UsageError("layer sizes must be non-increasing");
    }
    if (cfg.communities == 0) throw UsageError("communities must be at least 1");
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(cfg.p_in) || !prob(cfg.p_out)) throw UsageError("edge probabilities must lie in [0, 1]");
    if (!(cfg.p_in > cfg.p_out)) throw UsageError("intra-community probability must exceed inter");
}

namespace {

// Uniform [0, 1) from the top 53 bits: identical across standard libraries.
double draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

} // namespace

MultiplexGraph generate(const SynthConfig& cfg) {
    validate(cfg);
    std::mt19937_64 rng(cfg.seed);
    std::vector<EdgeRecord> records;
    for (std::size_t li = 0; li < cfg.layer_sizes.size(); ++li) {
        const std::size_t n = cfg.layer_sizes[li];
        const std::string layer = "L" + std::to_string(li + 1);
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{1});
        shuffle(order, rng);
        std::vector<std::size_t> community(n + 1);
        std::size_t k = cfg.communities;
        if (cfg.community_size > 0) k = std::max<std::size_t>(1, (n + cfg.community_size / 2) / cfg.community_size);
        k = std::min(k, n);
        for (std::size_t i = 0; i < n; ++i) community[order[i]] = i * k / n;
        for (std::size_t u = 1; u <= n; ++u)
            for (std::size_t v = u + 1; v <= n; ++v) {
                const double p = community[u] == community[v] ? cfg.p_in : cfg.p_out;
                if (draw(rng) < p) records.push_back({std::to_string(u), std::to_string(v), layer});
            }
    }
    std::vector<std::vector<EdgeRecord>> sets{std::move(records)};
    auto graphs = build_graphs(sets, {}, false);
    return std::move(graphs.front());
}

GrowthPair generate_growth(const GrowthConfig& cfg) {
    if (cfg.hubs == 0 || cfg.hubs > cfg.old_nodes) throw UsageError("hubs must be in 1..old_nodes");
    if (cfg.hub_bias < 0 || cfg.hub_bias > 1 || cfg.p_social < 0 || cfg.p_social > 1)
        throw UsageError("probabilities must lie in [0, 1]");
    std::mt19937_64 rng(cfg.seed);
    auto core = [](std::size_t i) { return "c" + std::to_string(i); };

    std::vector<EdgeRecord> train;
    for (std::size_t u = 0; u < cfg.old_nodes; ++u)
        for (std::size_t v = u + 1; v < cfg.old_nodes; ++v)
            if (draw(rng) < cfg.p_social) train.push_back({core(u), core(v), "social"});

    std::vector<std::size_t> ids(cfg.old_nodes);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    shuffle(ids, rng);
    const std::vector<std::size_t> hubs(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(cfg.hubs));
    std::size_t follower = 0;
    for (std::size_t h : hubs)
        for (std::size_t f = 0; f < cfg.followers_per_hub; ++f)
            train.push_back({core(h), "f" + std::to_string(follower++), "follow"});

    std::vector<EdgeRecord> test = train;
    for (std::size_t i = 0; i < cfg.new_nodes; ++i) {
        const std::size_t target = draw(rng) < cfg.hub_bias ? hubs[rng() % hubs.size()] : rng() % cfg.old_nodes;
        test.push_back({"n" + std::to_string(i), core(target), "follow"});
    }
    std::vector<std::pair<std::string, std::string>> attrs;
    for (std::size_t u = 0; u < cfg.old_nodes; ++u) attrs.emplace_back(core(u), "member");
    for (std::size_t h : hubs) attrs[h].second = "hub";
    for (std::size_t f = 0; f < follower; ++f) attrs.emplace_back("f" + std::to_string(f), "member");
    for (std::size_t i = 0; i < cfg.new_nodes; ++i) attrs.emplace_back("n" + std::to_string(i), "member");
    std::vector<std::vector<EdgeRecord>> sets{std::move(train), std::move(test)};
    auto graphs = build_graphs(sets, attrs, false);
    return {std::move(graphs[0]), std::move(graphs[1])};
}

} // namespace muxrule
