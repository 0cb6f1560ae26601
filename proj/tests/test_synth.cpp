#include <gtest/gtest.h>

#include <cmath>

#include "muxrule/error.hpp"
#include "muxrule/synth.hpp"
#include "support.hpp"

using namespace muxrule;
using namespace muxtest;

namespace {

std::set<std::string> layer_nodes(const MultiplexGraph& g, LayerId l) {
    std::set<std::string> out;
    for (const Edge& e : g.stored_edges())
        if (e.layer == l) out.insert(g.node_names().name(e.src));
    return out;
}

// Sizes of k near-equal blocks over n positions.
std::vector<std::size_t> block_sizes(std::size_t n, std::size_t k) {
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) ++sizes[i * k / n];
    return sizes;
}

} // namespace

TEST(Synth, OneCommunityCompleteGraph) {
    SynthConfig cfg;
    cfg.layer_sizes = {12};
    cfg.communities = 1;
    cfg.p_in = 1.0;
    cfg.p_out = 0.0;
    auto g = generate(cfg);
    EXPECT_EQ(g.node_count(), 12u);
    EXPECT_EQ(g.edge_count(), 66u);
    EXPECT_FALSE(g.directed());
    EXPECT_EQ(g.layer_names().name(0), "L1");
}

TEST(Synth, NoInterEdgesGivesTwoCliques) {
    SynthConfig cfg;
    cfg.layer_sizes = {20};
    cfg.communities = 2;
    cfg.p_in = 1.0;
    cfg.p_out = 0.0;
    auto g = generate(cfg);
    EXPECT_EQ(g.edge_count(), 2u * 45u);
    // Every node has degree 9: two disjoint 10-cliques.
    for (NodeId u : g.nodes()) EXPECT_EQ(g.out_neighbors(u, 0).size(), 9u);
    auto sg = collapse(g);
    std::map<NodeId, std::set<NodeId>> nb;
    for (auto [a, b] : sg.edges) {
        nb[a].insert(b);
        nb[b].insert(a);
    }
    for (auto [a, b] : sg.edges) {
        // Neighbours of adjacent nodes coincide apart from each other.
        auto x = nb[a], y = nb[b];
        x.erase(b);
        y.erase(a);
        EXPECT_EQ(x, y);
    }
}

TEST(Synth, EdgeCountsWithinBinomialBounds) {
    SynthConfig cfg;
    auto g = generate(cfg);
    EXPECT_EQ(g.node_count(), 200u);
    ASSERT_EQ(g.layer_count(), 4u);
    for (LayerId l = 0; l < 4; ++l) {
        const std::size_t n = cfg.layer_sizes[l];
        double intra = 0;
        for (auto s : block_sizes(n, cfg.communities)) intra += static_cast<double>(s * (s - 1) / 2);
        const double inter = static_cast<double>(n * (n - 1) / 2) - intra;
        const double mean = intra * cfg.p_in + inter * cfg.p_out;
        const double sd = std::sqrt(intra * cfg.p_in * (1 - cfg.p_in) + inter * cfg.p_out * (1 - cfg.p_out));
        EXPECT_NEAR(static_cast<double>(g.layer_edge_count(l)), mean, 3 * sd) << "layer " << l;
    }
}

TEST(Synth, SmallerLayersNest) {
    SynthConfig cfg;
    cfg.seed = 4;
    auto g = generate(cfg);
    for (LayerId l = 0; l < 4; ++l) {
        auto nodes = layer_nodes(g, l);
        for (const auto& name : nodes) EXPECT_LE(std::stoul(name), cfg.layer_sizes[l]);
        if (l > 0) {
            auto bigger = layer_nodes(g, static_cast<LayerId>(l - 1));
            for (const auto& name : nodes) EXPECT_LE(std::stoul(name), *std::max_element(
                                                                            cfg.layer_sizes.begin() + l - 1,
                                                                            cfg.layer_sizes.begin() + l));
            EXPECT_LE(nodes.size(), bigger.size() + 1);
        }
    }
}

TEST(Synth, SeedDeterminesGraph) {
    SynthConfig a, b;
    b.seed = 2;
    EXPECT_TRUE(same_graph(generate(a), generate(a)));
    EXPECT_FALSE(same_graph(generate(a), generate(b)));
}

TEST(Synth, CommunitySizeSetsBlockCount) {
    SynthConfig cfg;
    cfg.layer_sizes = {100};
    cfg.community_size = 25;
    cfg.p_in = 1.0;
    cfg.p_out = 0.0;
    auto g = generate(cfg);
    EXPECT_EQ(g.edge_count(), 4u * 300u);
}

TEST(Synth, RejectsBadConfig) {
    SynthConfig cfg;
    cfg.layer_sizes = {50, 100};
    EXPECT_THROW(validate(cfg), UsageError);
    cfg.layer_sizes = {100, 0};
    EXPECT_THROW(validate(cfg), UsageError);
    cfg = {};
    cfg.p_in = 0.01;
    EXPECT_THROW(validate(cfg), UsageError);
    cfg = {};
    cfg.p_out = -0.1;
    EXPECT_THROW(validate(cfg), UsageError);
    cfg = {};
    cfg.communities = 0;
    EXPECT_THROW(generate(cfg), UsageError);
}

TEST(Growth, StructureAndSharedDictionaries) {
    GrowthConfig cfg;
    auto pair = generate_growth(cfg);
    const auto& tr = pair.train;
    const auto& te = pair.test;
    EXPECT_EQ(tr.node_names(), te.node_names());
    EXPECT_EQ(tr.layer_names(), te.layer_names());
    for (const Edge& e : tr.logical_edges()) EXPECT_TRUE(te.has_edge(e));
    EXPECT_EQ(te.edge_count() - tr.edge_count(), cfg.new_nodes);

    const auto hub = tr.attr_names().find("hub");
    std::size_t hubs = 0;
    for (NodeId u : te.nodes()) hubs += te.attr(u) == hub;
    EXPECT_EQ(hubs, cfg.hubs);

    const LayerId follow = layer(te, "follow");
    for (const Edge& e : te.logical_edges()) {
        if (tr.has_edge(e)) continue;
        EXPECT_EQ(e.layer, follow);
        const auto& a = te.node_names().name(e.src);
        const auto& b = te.node_names().name(e.dst);
        EXPECT_NE(a[0] == 'n', b[0] == 'n');
        EXPECT_FALSE(tr.has_node(a[0] == 'n' ? e.src : e.dst));
    }
    EXPECT_TRUE(same_graph(generate_growth(cfg).train, tr));
}
