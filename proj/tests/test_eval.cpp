#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "muxrule/error.hpp"
#include "muxrule/eval.hpp"
#include "support.hpp"

using namespace muxrule;
using namespace muxtest;

namespace {

const std::filesystem::path kAarhus = std::filesystem::path(MUXRULE_DATA_DIR) / "aarhus_cs.edges";

MultiplexGraph aarhus() { return load_graph(kAarhus, std::nullopt, {false, EdgeFormat::plain}); }

double mann_whitney(const std::vector<double>& pos, const std::vector<double>& neg) {
    double wins = 0;
    for (double p : pos)
        for (double n : neg) wins += p > n ? 1.0 : (p == n ? 0.5 : 0.0);
    return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
    auto dir = std::filesystem::temp_directory_path() / "muxrule_tests";
    std::filesystem::create_directories(dir);
    auto path = dir / name;
    std::ofstream(path) << body;
    return path;
}

} // namespace

TEST(SplitRandom, AarhusFoldSizes) {
    auto g = aarhus();
    auto splits = split_random(g, 10, 7);
    ASSERT_EQ(splits.size(), 10u);
    for (const auto& s : splits) {
        EXPECT_EQ(s.test_positives.size(), 62u);
        EXPECT_EQ(s.train.edge_count(), 558u);
        for (const auto& e : s.test_positives) EXPECT_FALSE(s.train.has_edge(e));
    }
}

TEST(SplitRandom, FoldsPartitionTheEdges) {
    auto g = random_graph({30, 3, 1, 0.05, true}, 2);
    auto splits = split_random(g, 7, 99);
    std::vector<Edge> all;
    for (const auto& s : splits) all.insert(all.end(), s.test_positives.begin(), s.test_positives.end());
    std::sort(all.begin(), all.end());
    EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
    EXPECT_EQ(all, g.logical_edges());
    std::size_t lo = SIZE_MAX, hi = 0;
    for (const auto& s : splits) {
        lo = std::min(lo, s.test_positives.size());
        hi = std::max(hi, s.test_positives.size());
    }
    EXPECT_LE(hi - lo, 1u);
}

TEST(SplitRandom, SeedDeterminesSplit) {
    auto g = aarhus();
    auto a = split_random(g, 10, 3), b = split_random(g, 10, 3), c = split_random(g, 10, 4);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].test_positives, b[i].test_positives);
    EXPECT_NE(a[0].test_positives, c[0].test_positives);
}

TEST(SplitRandom, NodesMissingFromTrainingAreNew) {
    auto g = graph_from({{"1", "2", "a"}, {"2", "3", "a"}, {"3", "4", "a"}, {"4", "5", "a"}, {"5", "6", "a"},
                         {"6", "7", "a"}, {"7", "8", "a"}, {"8", "9", "a"}, {"9", "10", "a"}, {"10", "11", "a"}},
                        false);
    for (const auto& s : split_random(g, 10, 1)) {
        ASSERT_EQ(s.test_positives.size(), 1u);
        const Edge e = s.test_positives[0];
        const int old = int(s.train.has_node(e.src)) + int(s.train.has_node(e.dst));
        const auto want = old == 2 ? LinkCategory::old_old : (old == 1 ? LinkCategory::old_new : LinkCategory::new_new);
        EXPECT_EQ(s.categories[0], want);
    }
    EXPECT_THROW(split_random(g, 1, 1), UsageError);
}

TEST(SplitTemporal, IdenticalFilesGiveNoPositives) {
    auto a = temp_file("t0.txt", "1 2 a\n2 3 b\n");
    auto s = load_temporal(a, a, std::nullopt, {true, EdgeFormat::plain});
    EXPECT_TRUE(s.test_positives.empty());
}

TEST(SplitTemporal, CategoriesFollowEndpointAge) {
    auto tr = temp_file("tr.txt", "1 2 a\n2 3 a\n");
    auto te = temp_file("te.txt", "1 2 a\n2 3 a\n1 99 a\n1 3 a\n98 99 a\n");
    auto s = load_temporal(tr, te, std::nullopt, {true, EdgeFormat::plain});
    ASSERT_EQ(s.test_positives.size(), 3u);
    std::map<LinkCategory, int> seen;
    for (auto c : s.categories) ++seen[c];
    EXPECT_EQ(seen[LinkCategory::old_old], 1);
    EXPECT_EQ(seen[LinkCategory::old_new], 1);
    EXPECT_EQ(seen[LinkCategory::new_new], 1);
}

TEST(Candidates, SmallDirectedCount) {
    EvalSplit s;
    s.train = graph_from({{"1", "2", "a"}, {"2", "3", "a"}}, true);
    EXPECT_EQ(candidates(s, NegativeMode::full()).size(), 4u);
    EXPECT_EQ(candidate_population(s), 4u);
}

TEST(Candidates, AarhusPopulation) {
    auto splits = split_random(aarhus(), 10, 7);
    for (std::size_t f : {0u, 5u}) {
        const auto& s = splits[f];
        const std::size_t n = s.train.node_count();
        std::size_t inside = 0;
        for (const auto& e : s.test_positives) inside += s.train.has_node(e.src) && s.train.has_node(e.dst);
        const std::size_t want = n * (n - 1) / 2 * s.train.layer_count() - s.train.edge_count() - inside;
        auto c = candidates(s, NegativeMode::full());
        EXPECT_EQ(c.size(), want);
        EXPECT_EQ(candidate_population(s), want);
        for (const auto& e : c) {
            EXPECT_LT(e.src, e.dst);
            EXPECT_FALSE(s.train.has_edge(e));
        }
    }
}

TEST(Candidates, SampledIsDeterministicAndCapped) {
    auto splits = split_random(aarhus(), 10, 7);
    auto a = candidates(splits[0], NegativeMode::sampled(10, 5));
    auto b = candidates(splits[0], NegativeMode::sampled(10, 5));
    auto c = candidates(splits[0], NegativeMode::sampled(10, 6));
    EXPECT_EQ(a.size(), 10u);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    auto full = candidates(splits[0], NegativeMode::full());
    for (const auto& e : a) EXPECT_TRUE(std::binary_search(full.begin(), full.end(), e));

    EvalSplit tiny;
    tiny.train = graph_from({{"1", "2", "a"}, {"2", "3", "a"}}, true);
    std::vector<std::string> warnings;
    auto capped = candidates(tiny, NegativeMode::sampled(100, 1), &warnings);
    EXPECT_EQ(capped.size(), 4u);
    EXPECT_EQ(warnings.size(), 1u);
}

TEST(Candidates, ParseMode) {
    EXPECT_EQ(parse_negative_mode("full", 3).sample, 0u);
    auto m = parse_negative_mode("sampled:250", 3);
    EXPECT_EQ(m.sample, 250u);
    EXPECT_EQ(m.seed, 3u);
    EXPECT_THROW(parse_negative_mode("sampled:", 1), UsageError);
    EXPECT_THROW(parse_negative_mode("some", 1), UsageError);
}

TEST(Roc, PerfectSeparation) {
    std::vector<double> pos{1, 1, 1}, neg{0, 0};
    auto r = roc_from_scores(pos, neg);
    EXPECT_DOUBLE_EQ(r.auc, 1.0);
    EXPECT_EQ(r.positives, 3u);
    EXPECT_EQ(r.negatives, 2u);
}

TEST(Roc, AllTiedIsExactlyHalf) {
    std::vector<double> pos(17, 0.3), neg(40, 0.3);
    EXPECT_EQ(roc_from_scores(pos, neg).auc, 0.5);
}

TEST(Roc, CurveShape) {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> d(0, 5);
    std::vector<double> pos, neg;
    for (int i = 0; i < 50; ++i) pos.push_back(d(rng) + 1);
    for (int i = 0; i < 70; ++i) neg.push_back(d(rng));
    auto r = roc_from_scores(pos, neg);
    ASSERT_GE(r.roc.size(), 2u);
    EXPECT_EQ(r.roc.front().fpr, 0.0);
    EXPECT_EQ(r.roc.front().tpr, 0.0);
    EXPECT_EQ(r.roc.back().fpr, 1.0);
    EXPECT_EQ(r.roc.back().tpr, 1.0);
    for (std::size_t i = 1; i < r.roc.size(); ++i) {
        EXPECT_GE(r.roc[i].fpr, r.roc[i - 1].fpr);
        EXPECT_GE(r.roc[i].tpr, r.roc[i - 1].tpr);
        EXPECT_LT(r.roc[i].threshold, r.roc[i - 1].threshold);
    }
}

TEST(Roc, EmptySideIsAnError) {
    std::vector<double> some{1.0}, none;
    EXPECT_THROW(roc_from_scores(some, none), EvaluationError);
    EXPECT_THROW(roc_from_scores(none, some), EvaluationError);
}

TEST(Roc, UniformScoresNearHalf) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> pos, neg;
    for (int i = 0; i < 1000; ++i) {
        pos.push_back(u(rng));
        neg.push_back(u(rng));
    }
    EXPECT_NEAR(auc_from_scores(pos, neg), 0.5, 0.03);
}

TEST(Roc, MatchesMannWhitney) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<int> size(1, 300), val(0, 8 + trial);
        std::vector<double> pos, neg;
        const int np = size(rng), nn = size(rng);
        for (int i = 0; i < np; ++i) pos.push_back(val(rng) * 0.5 + 0.25);
        for (int i = 0; i < nn; ++i) neg.push_back(val(rng) * 0.5);
        const double want = mann_whitney(pos, neg);
        EXPECT_NEAR(roc_from_scores(pos, neg).auc, want, 1e-12);
        EXPECT_NEAR(auc_from_scores(pos, neg), want, 1e-12);
    }
}

TEST(Roc, TableScoresMissingLinksAsZero) {
    EvalSplit s;
    s.train = graph_from({{"1", "2", "a"}, {"2", "3", "a"}}, true);
    s.test_positives = {{node(s.train, "3"), node(s.train, "1"), 0}};
    s.categories = {LinkCategory::old_old};
    s.negatives = candidates(s, NegativeMode::full());
    ScoreTable t("t", {{{node(s.train, "3"), node(s.train, "1"), 0}, 2.0}});
    auto r = roc_auc(t, s);
    EXPECT_DOUBLE_EQ(r.auc, 1.0);
    EXPECT_EQ(r.negatives, 3u);
    EXPECT_EQ(r.predictor, "t");
    EXPECT_DOUBLE_EQ(roc_auc(ScoreTable{}, s).auc, 0.5);
}

namespace {

EvalSplit growth_split() {
    auto tr = temp_file("on_tr.txt", "1 2 a\n2 3 a\n3 4 b\n");
    auto te = temp_file("on_te.txt", "1 2 a\n2 3 a\n3 4 b\n1 50 a\n4 51 b\n");
    return load_temporal(tr, te, std::nullopt, {true, EdgeFormat::plain});
}

} // namespace

TEST(OldNewEval, EmptyTableIsHalf) {
    auto s = growth_split();
    auto r = evaluate_old_new(OldNewScoreTable{}, s);
    EXPECT_EQ(r.auc, 0.5);
    EXPECT_TRUE(r.old_new);
    EXPECT_EQ(r.positives, 2u);
    // 4 old nodes, 2 layers, 2 directions.
    EXPECT_EQ(r.negatives, 4u * 2u * 2u - 2u);
}

TEST(OldNewEval, PerfectTableIsOne) {
    auto s = growth_split();
    const auto& g = s.train;
    OldNewScoreTable t("perfect", {{{node(g, "1"), layer(g, "a"), Direction::out}, 1.0, {}, {}},
                                   {{node(g, "4"), layer(g, "b"), Direction::out}, 1.0, {}, {}}});
    EXPECT_DOUBLE_EQ(evaluate_old_new(t, s).auc, 1.0);
}

TEST(Kendall, HandExamples) {
    std::vector<double> a{1, 2, 3, 4}, rev{4, 3, 2, 1};
    EXPECT_DOUBLE_EQ(kendall_tau(a, a), 1.0);
    EXPECT_DOUBLE_EQ(kendall_tau(a, rev), -1.0);
    std::vector<double> x{1, 2, 3}, y{1, 3, 2};
    EXPECT_NEAR(kendall_tau(x, y), 1.0 / 3.0, 1e-15);
    std::vector<double> tx{1, 1, 2}, ty{1, 2, 3};
    EXPECT_NEAR(kendall_tau(tx, ty), 2.0 / std::sqrt(6.0), 1e-15);
    std::vector<double> shorter{1, 2};
    EXPECT_THROW(kendall_tau(a, shorter), UsageError);
}

TEST(Summary, MeanAndPooled) {
    std::vector<std::vector<double>> pos{{1, 2}, {0.5}}, neg{{0, 3}, {0.1, 0.2}};
    std::vector<EvalReport> reps{roc_from_scores(pos[0], neg[0]), roc_from_scores(pos[1], neg[1])};
    auto s = summarize(reps, pos, neg);
    EXPECT_DOUBLE_EQ(s.mean_auc, (0.5 + 1.0) / 2);
    EXPECT_NEAR(s.pooled_auc, mann_whitney({1, 2, 0.5}, {0, 3, 0.1, 0.2}), 1e-15);
    EXPECT_EQ(s.folds.size(), 2u);
}
