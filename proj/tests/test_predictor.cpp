#include <gtest/gtest.h>

#include <cmath>

#include "muxrule/error.hpp"
#include "muxrule/miner.hpp"
#include "muxrule/predictor.hpp"
#include "muxrule/rules.hpp"
#include "support.hpp"

using namespace muxrule;
using namespace muxtest;

namespace {

Rule make_rule(std::size_t id, Pattern ante, Pattern cons, PatternEdge delta, double conf, double lift = 1.0) {
    Rule r;
    r.id = id;
    r.new_node = cons.node_count() > ante.node_count();
    r.antecedent = std::move(ante);
    r.consequent = std::move(cons);
    r.delta_edge = delta;
    r.confidence = conf;
    r.lift = lift;
    return r;
}

// Host with the edge (u, v, l) added.
MultiplexGraph inserted(const MultiplexGraph& g, Edge e) {
    std::vector<Edge> edges(g.stored_edges().begin(), g.stored_edges().end());
    edges.push_back(e);
    if (!g.directed()) edges.push_back({e.dst, e.src, e.layer});
    return MultiplexGraph::with_edges(g, edges);
}

} // namespace

TEST(ScoreLinks, NoRulesNoScores) {
    auto g = graph_from({{"1", "2", "a"}}, true);
    EXPECT_TRUE(score_links(g, {}).empty());
}

TEST(ScoreLinks, ReverseEdgeInOtherLayer) {
    auto g = graph_from({{"1", "2", "a"}, {"3", "4", "b"}}, true);
    const LayerId a = layer(g, "a"), b = layer(g, "b");
    std::vector<Rule> rules{make_rule(0, Pattern(true, {0, 0}, {{0, 1, a}}),
                                      Pattern(true, {0, 0}, {{0, 1, a}, {1, 0, b}}), {1, 0, b}, 0.5)};
    auto conf = score_links(g, rules, {Weighting::conf});
    ASSERT_EQ(conf.size(), 1u);
    const Edge want{node(g, "2"), node(g, "1"), b};
    EXPECT_EQ(conf.entries()[0].link, want);
    EXPECT_DOUBLE_EQ(conf.score(want), 0.5);
    auto count = score_links(g, rules, {Weighting::count});
    EXPECT_DOUBLE_EQ(count.score(want), 1.0);
}

TEST(ScoreLinks, WeightingsAggregate) {
    auto g = graph_from({{"1", "2", "a"}, {"3", "4", "b"}}, true);
    const LayerId a = layer(g, "a"), b = layer(g, "b");
    Pattern ante(true, {0, 0}, {{0, 1, a}});
    std::vector<Rule> rules{
        make_rule(0, ante, Pattern(true, {0, 0}, {{0, 1, a}, {1, 0, b}}), {1, 0, b}, 0.5, 3.0),
        // Same prediction through a second, differently weighted rule.
        make_rule(1, ante, Pattern(true, {0, 0}, {{0, 1, a}, {1, 0, b}}), {1, 0, b}, 0.25, 1.0)};
    const Edge want{node(g, "2"), node(g, "1"), b};
    EXPECT_DOUBLE_EQ(score_links(g, rules, {Weighting::count}).score(want), 2.0);
    EXPECT_DOUBLE_EQ(score_links(g, rules, {Weighting::conf}).score(want), 0.75);
    EXPECT_DOUBLE_EQ(score_links(g, rules, {Weighting::lift}).score(want), 4.0);
    EXPECT_DOUBLE_EQ(score_links(g, rules, {Weighting::conf_mean}).score(want), 0.375);
    EXPECT_DOUBLE_EQ(score_links(g, rules, {Weighting::lift_mean}).score(want), 2.0);
}

TEST(ScoreLinks, NaNLiftRulesSkippedUnderLift) {
    auto g = graph_from({{"1", "2", "a"}, {"3", "4", "b"}}, true);
    const LayerId a = layer(g, "a"), b = layer(g, "b");
    std::vector<Rule> rules{make_rule(0, Pattern(true, {0, 0}, {{0, 1, a}}),
                                      Pattern(true, {0, 0}, {{0, 1, a}, {1, 0, b}}), {1, 0, b}, 0.5,
                                      std::numeric_limits<double>::quiet_NaN())};
    EXPECT_TRUE(score_links(g, rules, {Weighting::lift}).empty());
    EXPECT_EQ(score_links(g, rules, {Weighting::conf}).size(), 1u);
}

TEST(ScoreLinks, ExistingEdgesSkipped) {
    auto g = graph_from({{"1", "2", "a"}, {"2", "1", "b"}}, true);
    const LayerId a = layer(g, "a"), b = layer(g, "b");
    std::vector<Rule> rules{make_rule(0, Pattern(true, {0, 0}, {{0, 1, a}}),
                                      Pattern(true, {0, 0}, {{0, 1, a}, {1, 0, b}}), {1, 0, b}, 0.5)};
    EXPECT_TRUE(score_links(g, rules).empty());
}

TEST(ScoreLinks, PerRuleDedupVersusPerEmbedding) {
    // Triangle-closing rule: 1 and 3 share two paths, so one rule fires twice on (1,3).
    auto g = graph_from({{"1", "2", "a"}, {"2", "3", "a"}, {"1", "4", "a"}, {"4", "3", "a"}}, false);
    std::vector<Rule> rules{make_rule(0, Pattern(false, {0, 0, 0}, {{0, 1, 0}, {1, 2, 0}}),
                                      Pattern(false, {0, 0, 0}, {{0, 1, 0}, {0, 2, 0}, {1, 2, 0}}), {0, 2, 0}, 0.5)};
    const Edge e13{node(g, "1"), node(g, "3"), 0};
    EXPECT_DOUBLE_EQ(score_links(g, rules, {Weighting::count}).score(e13), 1.0);
    PredictOptions per;
    per.weighting = Weighting::count;
    per.per_embedding = true;
    // Two paths, each matched in both orientations of the symmetric antecedent.
    EXPECT_DOUBLE_EQ(score_links(g, rules, per).score(e13), 4.0);
}

TEST(ScoreLinks, MatchesInsertAndMatchOracle) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const bool directed = seed != 1;
        auto g = random_graph({14, 2, 1 + seed % 2, 0.08, directed}, 60 + seed);
        MinerConfig cfg;
        cfg.min_support = 2;
        cfg.max_nodes = 3;
        auto rules = build_rules(mine(g, cfg).patterns, g);
        auto count = score_links(g, rules, {Weighting::count});
        auto conf = score_links(g, rules, {Weighting::conf});

        std::map<Edge, std::pair<double, double>> oracle;
        const auto nodes = g.nodes();
        for (NodeId u : nodes)
            for (NodeId v : nodes) {
                if (u == v || (!directed && u > v)) continue;
                for (LayerId l = 0; l < g.layer_count(); ++l) {
                    if (g.has_edge(u, v, l)) continue;
                    auto h = inserted(g, {u, v, l});
                    for (const auto& r : rules) {
                        if (r.new_node || r.delta_edge.layer != l) continue;
                        bool fired = false;
                        for (const auto& m : brute_embeddings(r.consequent, h)) {
                            NodeId a = m[r.delta_edge.src], b = m[r.delta_edge.dst];
                            if (!directed && a > b) std::swap(a, b);
                            if (a == u && b == v) {
                                fired = true;
                                break;
                            }
                        }
                        if (fired) {
                            oracle[{u, v, l}].first += 1;
                            oracle[{u, v, l}].second += r.confidence;
                        }
                    }
                }
            }
        ASSERT_EQ(count.size(), oracle.size()) << "seed " << seed;
        for (const auto& [e, want] : oracle) {
            EXPECT_DOUBLE_EQ(count.score(e), want.first);
            EXPECT_NEAR(conf.score(e), want.second, 1e-12);
        }
    }
}

TEST(ScoreLinks, AddingRuleNeverLowersScores) {
    auto g = random_graph({16, 2, 1, 0.1, true}, 9);
    MinerConfig cfg;
    cfg.min_support = 2;
    cfg.max_nodes = 3;
    auto rules = build_rules(mine(g, cfg).patterns, g);
    ASSERT_GT(rules.size(), 2u);
    std::vector<Rule> fewer(rules.begin(), rules.end() - 1);
    for (auto w : {Weighting::count, Weighting::conf, Weighting::lift}) {
        auto small = score_links(g, fewer, {w});
        auto big = score_links(g, rules, {w});
        for (const auto& e : small.entries()) EXPECT_GE(big.score(e.link), e.score);
    }
}

TEST(ScoreLinks, DeterministicAcrossWorkers) {
    auto g = random_graph({20, 2, 1, 0.1, false}, 12);
    MinerConfig cfg;
    cfg.min_support = 2;
    cfg.max_nodes = 4;
    auto rules = build_rules(mine(g, cfg).patterns, g);
    PredictOptions one, many;
    many.workers = 3;
    auto a = score_links(g, rules, one);
    auto b = score_links(g, rules, many);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a.entries()[i].link, b.entries()[i].link);
        EXPECT_EQ(a.entries()[i].score, b.entries()[i].score);
    }
}

TEST(ScoreLinks, ProvenanceListsRules) {
    auto g = graph_from({{"1", "2", "a"}, {"3", "4", "b"}}, true);
    std::vector<Rule> rules{make_rule(7, Pattern(true, {0, 0}, {{0, 1, 0}}),
                                      Pattern(true, {0, 0}, {{0, 1, 0}, {1, 0, 1}}), {1, 0, 1}, 0.5)};
    PredictOptions opt;
    opt.provenance = true;
    auto t = score_links(g, rules, opt);
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t.entries()[0].rules, std::vector<std::size_t>{7});
}

TEST(OldNew, NoNewNodeRulesEmpty) {
    auto g = graph_from({{"1", "2", "a"}}, true);
    std::vector<Rule> rules{make_rule(0, Pattern(true, {0, 0}, {{0, 1, 0}}),
                                      Pattern(true, {0, 0}, {{0, 1, 0}, {1, 0, 0}}), {1, 0, 0}, 0.5)};
    EXPECT_TRUE(score_old_new(g, rules).empty());
}

TEST(OldNew, SingleAnchoredKey) {
    auto g = graph_from({{"7", "3", "a"}, {"5", "6", "b"}}, true, {{"7", "hub"}});
    const LayerId a = layer(g, "a"), b = layer(g, "b");
    const AttrId hub = static_cast<AttrId>(g.attr_names().find("hub"));
    const AttrId plain = static_cast<AttrId>(g.attr_names().find(kDefaultAttribute));
    std::vector<Rule> rules{make_rule(0, Pattern(true, {hub, plain}, {{0, 1, a}}),
                                      Pattern(true, {hub, plain, hub}, {{0, 1, a}, {0, 2, b}}), {0, 2, b}, 0.5)};
    auto t = score_old_new(g, rules);
    ASSERT_EQ(t.size(), 1u);
    const auto& e = t.entries()[0];
    EXPECT_EQ(e.key, (OldNewKey{node(g, "7"), b, Direction::out}));
    EXPECT_DOUBLE_EQ(e.score, 0.5);
    EXPECT_EQ(e.new_node_attrs, std::vector<AttrId>{hub});
}

TEST(OldNew, IncomingAndUndirectedDirections) {
    auto g = graph_from({{"7", "3", "a"}}, true);
    std::vector<Rule> rules{make_rule(0, Pattern(true, {0, 0}, {{0, 1, 0}}),
                                      Pattern(true, {0, 0, 0}, {{0, 1, 0}, {2, 1, 0}}), {2, 1, 0}, 0.3)};
    auto t = score_old_new(g, rules);
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t.entries()[0].key, (OldNewKey{node(g, "3"), 0, Direction::in}));

    auto u = graph_from({{"7", "3", "a"}}, false);
    std::vector<Rule> urules{make_rule(0, Pattern(false, {0, 0}, {{0, 1, 0}}),
                                       Pattern(false, {0, 0, 0}, {{0, 1, 0}, {1, 2, 0}}), {1, 2, 0}, 0.3)};
    auto ut = score_old_new(u, urules);
    // The symmetric antecedent lands on both endpoints.
    ASSERT_EQ(ut.size(), 2u);
    for (const auto& e : ut.entries()) EXPECT_EQ(e.key.direction, Direction::any);
}

TEST(Weighting, ParseRoundTrip) {
    for (auto w : {Weighting::count, Weighting::conf, Weighting::lift, Weighting::conf_mean, Weighting::lift_mean})
        EXPECT_EQ(parse_weighting(to_string(w)), w);
    EXPECT_THROW(parse_weighting("median"), UsageError);
}
