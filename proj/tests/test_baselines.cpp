#include <gtest/gtest.h>

#include <cmath>

#include "muxrule/baselines.hpp"
#include "muxrule/ensemble.hpp"
#include "muxrule/error.hpp"
#include "muxrule/eval.hpp"
#include "support.hpp"

using namespace muxrule;
using namespace muxtest;

namespace {

std::set<std::pair<NodeId, NodeId>> pairs_in(const MultiplexGraph& g, LayerId l) {
    std::set<std::pair<NodeId, NodeId>> out;
    for (const Edge& e : g.stored_edges())
        if (e.layer == l) out.emplace(e.src, e.dst);
    return out;
}

SimpleGraph simple(std::vector<std::pair<std::string, std::string>> edges) {
    std::vector<EdgeRecord> recs;
    for (auto& [a, b] : edges) recs.push_back({a, b, "x"});
    return collapse(graph_from(recs, false));
}

NodeId sid(const SimpleGraph& sg, const std::string& name) { return static_cast<NodeId>(sg.node_names.find(name)); }

double key_score(const ScoreTable& t, NodeId u, NodeId v) {
    if (u > v) std::swap(u, v);
    return t.score({u, v, 0});
}

std::vector<std::size_t> rank_order(const std::vector<double>& xs) {
    std::vector<std::size_t> idx(xs.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    return idx;
}

} // namespace

TEST(Cooccurrence, IdenticalLayersAreAllOnes) {
    auto g = graph_from({{"1", "2", "a"}, {"1", "2", "b"}, {"2", "3", "a"}, {"2", "3", "b"}}, true);
    auto p = layer_cooccurrence(g);
    for (LayerId i = 0; i < 2; ++i)
        for (LayerId j = 0; j < 2; ++j) EXPECT_DOUBLE_EQ(p(i, j), 1.0);
}

TEST(Cooccurrence, DisjointLayersAreZeroOffDiagonal) {
    auto g = graph_from({{"1", "2", "friend"}, {"2", "3", "enemy"}}, false);
    auto p = layer_cooccurrence(g);
    EXPECT_DOUBLE_EQ(p(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(p(1, 0), 0.0);
    EXPECT_DOUBLE_EQ(p(0, 0), 1.0);
}

TEST(Cooccurrence, MatchesPairIntersection) {
    for (bool directed : {true, false}) {
        auto g = random_graph({25, 3, 1, 0.1, directed}, 5);
        auto p = layer_cooccurrence(g);
        for (LayerId a = 0; a < g.layer_count(); ++a)
            for (LayerId b = 0; b < g.layer_count(); ++b) {
                auto pa = pairs_in(g, a), pb = pairs_in(g, b);
                std::size_t both = 0;
                for (const auto& x : pa) both += pb.count(x);
                const double want = pa.empty() ? 0.0 : static_cast<double>(both) / static_cast<double>(pa.size());
                EXPECT_NEAR(p(a, b), want, 1e-15);
            }
    }
}

TEST(Sharma, UnlinkedPairsAbsent) {
    auto g = graph_from({{"1", "2", "a"}, {"3", "4", "b"}, {"1", "2", "b"}}, false);
    auto t = sharma_scores(g);
    EXPECT_EQ(t.score({node(g, "1"), node(g, "3"), 0}), 0.0);
    EXPECT_EQ(t.find({node(g, "1"), node(g, "3"), 0}), nullptr);
    // (3,4) only in b: score in a is p[b][a] = 1/2.
    EXPECT_DOUBLE_EQ(t.score({node(g, "3"), node(g, "4"), layer(g, "a")}), 0.5);
}

TEST(Sharma, MatchesDirectSum) {
    for (bool directed : {true, false}) {
        auto g = random_graph({20, 3, 1, 0.1, directed}, 14);
        auto p = layer_cooccurrence(g);
        auto t = sharma_scores(g);
        std::size_t expected_keys = 0;
        for (NodeId u : g.nodes())
            for (NodeId v : g.nodes()) {
                if (u == v || (!directed && u > v)) continue;
                for (LayerId l1 = 0; l1 < g.layer_count(); ++l1) {
                    if (g.has_edge(u, v, l1)) continue;
                    double want = 0;
                    bool any = false;
                    for (LayerId l2 = 0; l2 < g.layer_count(); ++l2)
                        if (g.has_edge(u, v, l2)) {
                            want += p(l2, l1);
                            any = true;
                        }
                    if (any) ++expected_keys;
                    EXPECT_NEAR(t.score({u, v, l1}), want, 1e-12);
                }
            }
        EXPECT_EQ(t.size(), expected_keys);
    }
}

TEST(Classical, PathExample) {
    auto sg = simple({{"1", "2"}, {"2", "3"}});
    const NodeId a = sid(sg, "1"), c = sid(sg, "3");
    EXPECT_DOUBLE_EQ(key_score(classical_scores(sg, Classical::cn), a, c), 1.0);
    EXPECT_DOUBLE_EQ(key_score(classical_scores(sg, Classical::ja), a, c), 1.0);
    EXPECT_DOUBLE_EQ(key_score(classical_scores(sg, Classical::pa), a, c), 1.0);
    EXPECT_DOUBLE_EQ(key_score(classical_scores(sg, Classical::aa), a, c), 1.0 / std::log(2.0));
}

TEST(Classical, StarResourceAllocation) {
    auto sg = simple({{"c", "x"}, {"c", "y"}, {"c", "z"}});
    EXPECT_DOUBLE_EQ(key_score(classical_scores(sg, Classical::ra), sid(sg, "x"), sid(sg, "y")), 1.0 / 3.0);
}

TEST(Classical, MatchesNeighbourSets) {
    auto g = random_graph({30, 1, 1, 0.12, false}, 3);
    auto sg = collapse(g);
    std::map<NodeId, std::set<NodeId>> nb;
    for (auto [u, v] : sg.edges) {
        nb[u].insert(v);
        nb[v].insert(u);
    }
    for (auto m : {Classical::cn, Classical::aa, Classical::ra, Classical::pa, Classical::ja}) {
        auto t = classical_scores(sg, m);
        for (NodeId u : sg.nodes)
            for (NodeId v : sg.nodes) {
                if (u >= v || nb[u].contains(v)) continue;
                std::set<NodeId> common, uni(nb[u]);
                for (NodeId z : nb[u])
                    if (nb[v].contains(z)) common.insert(z);
                uni.insert(nb[v].begin(), nb[v].end());
                double want = 0;
                switch (m) {
                case Classical::cn: want = static_cast<double>(common.size()); break;
                case Classical::aa:
                    for (NodeId z : common)
                        if (nb[z].size() > 1) want += 1.0 / std::log(static_cast<double>(nb[z].size()));
                    break;
                case Classical::ra:
                    for (NodeId z : common) want += 1.0 / static_cast<double>(nb[z].size());
                    break;
                case Classical::pa: want = static_cast<double>(nb[u].size() * nb[v].size()); break;
                case Classical::ja:
                    want = uni.empty() ? 0.0 : static_cast<double>(common.size()) / static_cast<double>(uni.size());
                    break;
                }
                EXPECT_NEAR(t.score({u, v, 0}), want, 1e-12) << to_string(m);
            }
        for (const auto& e : t.entries()) {
            EXPECT_LT(e.link.src, e.link.dst);
            EXPECT_FALSE(nb[e.link.src].contains(e.link.dst));
        }
    }
}

TEST(Classical, EmptyGraphRejected) {
    SimpleGraph sg;
    EXPECT_THROW(classical_scores(sg, Classical::cn), UsageError);
    EXPECT_THROW(parse_classical("katz"), UsageError);
}

namespace {

struct Fixture {
    std::vector<Edge> candidates;
    std::vector<Edge> positives;
    ScoreTable signal;
    ScoreTable noise;
};

Fixture two_predictors(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Fixture f;
    std::vector<ScoredLink> sig, noi;
    for (NodeId i = 0; i < 400; ++i) {
        Edge e{i, i + 1000, 0};
        f.candidates.push_back(e);
        const bool pos = i % 4 == 0;
        if (pos) f.positives.push_back(e);
        sig.push_back({e, (pos ? 1.0 : 0.0) + gauss(rng)});
        noi.push_back({e, 5.0 * gauss(rng)});
    }
    f.signal = ScoreTable("signal", sig);
    f.noise = ScoreTable("noise", noi);
    return f;
}

} // namespace

TEST(Ensemble, DuplicateTableKeepsRanking) {
    auto f = two_predictors(1);
    std::vector<ScoreTable> tables{f.signal, f.signal};
    auto r = ensemble(tables, f.candidates, {}, EnsembleMode::base, 1);
    std::vector<double> a, b;
    for (const auto& e : f.candidates) {
        a.push_back(f.signal.score(e));
        b.push_back(r.scores.score(e));
    }
    EXPECT_EQ(rank_order(a), rank_order(b));
}

TEST(Ensemble, AnnealingDownweightsNoise) {
    auto f = two_predictors(2);
    std::vector<ScoreTable> tables{f.signal, f.noise};
    auto base = ensemble(tables, f.candidates, f.positives, EnsembleMode::base, 3);
    auto over = ensemble(tables, f.candidates, f.positives, EnsembleMode::over, 3);
    EXPECT_GT(over.auc, base.auc);
    EXPECT_GT(std::abs(over.weights[0]), std::abs(over.weights[1]));
    auto again = ensemble(tables, f.candidates, f.positives, EnsembleMode::over, 3);
    EXPECT_EQ(again.weights, over.weights);
}

TEST(Ensemble, OverNeverTrailsBase) {
    for (std::uint64_t seed = 10; seed < 15; ++seed) {
        auto f = two_predictors(seed);
        std::vector<ScoreTable> tables{f.noise, f.signal, f.noise};
        auto base = ensemble(tables, f.candidates, f.positives, EnsembleMode::base, seed);
        auto over = ensemble(tables, f.candidates, f.positives, EnsembleMode::over, seed);
        EXPECT_GE(over.auc, base.auc);
    }
}

TEST(Ensemble, ZScoresPreserveRanking) {
    auto f = two_predictors(4);
    std::vector<ScoreTable> tables{f.signal, f.noise};
    auto z = z_matrix(tables, f.candidates);
    for (std::size_t j = 0; j < tables.size(); ++j) {
        std::vector<double> raw, col;
        double mean = 0, sq = 0;
        for (std::size_t i = 0; i < f.candidates.size(); ++i) {
            raw.push_back(tables[j].score(f.candidates[i]));
            col.push_back(z[i][j]);
            mean += col.back();
            sq += col.back() * col.back();
        }
        EXPECT_EQ(rank_order(raw), rank_order(col));
        const double n = static_cast<double>(col.size());
        EXPECT_NEAR(mean / n, 0.0, 1e-12);
        EXPECT_NEAR(sq / n, 1.0, 1e-12);
    }
}

TEST(Ensemble, ConstantTableBecomesZeros) {
    auto f = two_predictors(5);
    std::vector<ScoredLink> flat;
    for (const auto& e : f.candidates) flat.push_back({e, 2.0});
    std::vector<ScoreTable> tables{f.signal, ScoreTable("flat", flat)};
    auto z = z_matrix(tables, f.candidates);
    for (const auto& row : z) EXPECT_EQ(row[1], 0.0);
}

TEST(Ensemble, RejectsBadInput) {
    auto f = two_predictors(6);
    std::vector<ScoreTable> one{f.signal};
    EXPECT_THROW(ensemble(one, f.candidates, f.positives, EnsembleMode::base, 1), UsageError);
    std::vector<ScoreTable> two{f.signal, f.noise};
    EXPECT_THROW(ensemble(two, f.candidates, {}, EnsembleMode::over, 1), EvaluationError);
    EXPECT_THROW(parse_ensemble_mode("under"), UsageError);
}
