#include "muxrule/eval.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

#include "muxrule/error.hpp"

namespace muxrule {

std::string_view to_string(LinkCategory c) {
    switch (c) {
    case LinkCategory::old_old: return "old-old";
    case LinkCategory::old_new: return "old-new";
    case LinkCategory::new_new: return "new-new";
    }
    return "old-old";
}

std::vector<EvalSplit> split_random(const MultiplexGraph& g, std::size_t folds, std::uint64_t seed) {
    if (folds < 2) throw UsageError("cross validation needs at least two folds");
    std::vector<Edge> edges = g.logical_edges();
    std::mt19937_64 rng(seed);
    // Fisher-Yates with explicit index draws.
    for (std::size_t i = edges.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(edges[i - 1], edges[j]);
    }

    std::vector<EvalSplit> out;
    const std::size_t m = edges.size();
    for (std::size_t f = 0; f < folds; ++f) {
        const std::size_t begin = f * m / folds, end = (f + 1) * m / folds;
        std::vector<Edge> train;
        train.reserve(m - (end - begin));
        train.insert(train.end(), edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(begin));
        train.insert(train.end(), edges.begin() + static_cast<std::ptrdiff_t>(end), edges.end());
        EvalSplit s;
        s.train = MultiplexGraph::with_edges(g, train);
        s.test_positives.assign(edges.begin() + static_cast<std::ptrdiff_t>(begin),
                                edges.begin() + static_cast<std::ptrdiff_t>(end));
        std::sort(s.test_positives.begin(), s.test_positives.end());
        for (const Edge& e : s.test_positives) {
            const int old = int(s.train.has_node(e.src)) + int(s.train.has_node(e.dst));
            s.categories.push_back(old == 2 ? LinkCategory::old_old
                                            : (old == 1 ? LinkCategory::old_new : LinkCategory::new_new));
        }
        s.fold = f;
        s.seed = seed;
        out.push_back(std::move(s));
    }
    return out;
}

EvalSplit split_temporal(const MultiplexGraph& train, const MultiplexGraph& test) {
    if (!(train.node_names() == test.node_names()) || !(train.layer_names() == test.layer_names()))
        throw UsageError("temporal split needs graphs with shared dictionaries");
    EvalSplit s;
    s.train = train;
    for (const Edge& e : test.logical_edges()) {
        if (train.has_edge(e)) continue;
        s.test_positives.push_back(e);
        const int old = int(train.has_node(e.src)) + int(train.has_node(e.dst));
        s.categories.push_back(old == 2 ? LinkCategory::old_old
                                        : (old == 1 ? LinkCategory::old_new : LinkCategory::new_new));
    }
    return s;
}

EvalSplit load_temporal(const std::filesystem::path& train_path, const std::filesystem::path& test_path,
                        const std::optional<std::filesystem::path>& attr_path, const LoadOptions& options) {
    std::vector<std::vector<EdgeRecord>> sets{read_edge_records(train_path, options.format),
                                              read_edge_records(test_path, options.format)};
    std::vector<std::pair<std::string, std::string>> attrs;
    if (attr_path) attrs = read_attr_records(*attr_path);
    auto graphs = build_graphs(sets, attrs, options.directed);
    return split_temporal(graphs[0], graphs[1]);
}

NegativeMode parse_negative_mode(std::string_view s, std::uint64_t seed) {
    if (s == "full") return NegativeMode::full();
    constexpr std::string_view prefix = "sampled:";
    if (s.starts_with(prefix)) {
        std::size_t k = 0;
        auto body = s.substr(prefix.size());
        auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), k);
        if (ec == std::errc() && ptr == body.data() + body.size() && k > 0) return NegativeMode::sampled(k, seed);
    }
    throw UsageError("negatives must be `full` or `sampled:K`, got '" + std::string(s) + "'");
}

namespace {

std::unordered_set<std::uint64_t> positive_keys(const EvalSplit& split) {
    std::unordered_set<std::uint64_t> out;
    for (const Edge& e : split.test_positives) out.insert(edge_key(e));
    return out;
}

bool eligible(const EvalSplit& split, const std::unordered_set<std::uint64_t>& pos, NodeId u, NodeId v, LayerId l) {
    return !split.train.has_edge(u, v, l) && !pos.contains(edge_key(u, v, l));
}

} // namespace

std::size_t candidate_population(const EvalSplit& split) {
    const auto& g = split.train;
    const std::size_t n = g.node_count();
    std::size_t pairs = g.directed() ? n * (n - (n > 0 ? 1 : 0)) : n * (n - (n > 0 ? 1 : 0)) / 2;
    std::size_t total = pairs * g.layer_count();
    total -= g.edge_count();
    for (const Edge& e : split.test_positives)
        if (g.has_node(e.src) && g.has_node(e.dst)) --total;
    return total;
}

std::vector<Edge> candidates(const EvalSplit& split, const NegativeMode& mode, std::vector<std::string>* warnings) {
    const auto& g = split.train;
    const auto pos = positive_keys(split);
    const auto nodes = g.nodes();
    const auto nl = static_cast<LayerId>(g.layer_count());

    if (mode.sample == 0) {
        std::vector<Edge> out;
        out.reserve(candidate_population(split));
        for (NodeId u : nodes)
            for (NodeId v : nodes) {
                if (u == v || (!g.directed() && u > v)) continue;
                for (LayerId l = 0; l < nl; ++l)
                    if (eligible(split, pos, u, v, l)) out.push_back(Edge{u, v, l});
            }
        return out;
    }

    const std::size_t population = candidate_population(split);
    std::size_t k = mode.sample;
    if (k > population) {
        if (warnings)
            warnings->push_back("requested " + std::to_string(k) + " negatives but only " +
                                std::to_string(population) + " exist; using all");
        k = population;
    }
    // Dense populations: enumerate and sample indices. Sparse draws: rejection sampling.
    std::mt19937_64 rng(mode.seed);
    std::vector<Edge> out;
    if (k * 4 >= population || population < 1'000'000) {
        auto all = candidates(split, NegativeMode::full());
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng() % (all.size() - i));
            std::swap(all[i], all[j]);
        }
        all.resize(k);
        out = std::move(all);
    } else {
        std::unordered_set<std::uint64_t> taken;
        while (out.size() < k) {
            NodeId u = nodes[rng() % nodes.size()];
            NodeId v = nodes[rng() % nodes.size()];
            const auto l = static_cast<LayerId>(rng() % nl);
            if (u == v) continue;
            if (!g.directed() && u > v) std::swap(u, v);
            if (!eligible(split, pos, u, v, l)) continue;
            if (taken.insert(edge_key(u, v, l)).second) out.push_back(Edge{u, v, l});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct Item {
    double score;
    bool positive;
};

std::vector<Item> ranked(std::span<const double> pos, std::span<const double> neg) {
    if (pos.empty() || neg.empty()) throw EvaluationError("ROC needs at least one positive and one negative");
    std::vector<Item> items;
    items.reserve(pos.size() + neg.size());
    for (double s : pos) items.push_back({s, true});
    for (double s : neg) items.push_back({s, false});
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.score > b.score; });
    return items;
}

} // namespace

EvalReport roc_from_scores(std::span<const double> pos, std::span<const double> neg) {
    const auto items = ranked(pos, neg);
    const double np = static_cast<double>(pos.size()), nn = static_cast<double>(neg.size());
    EvalReport rep;
    rep.positives = pos.size();
    rep.negatives = neg.size();
    rep.roc.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
    double tp = 0, fp = 0, area = 0;
    for (std::size_t i = 0; i < items.size();) {
        std::size_t j = i;
        double dtp = 0, dfp = 0;
        while (j < items.size() && items[j].score == items[i].score) {
            (items[j].positive ? dtp : dfp) += 1;
            ++j;
        }
        area += (dfp / nn) * ((tp + tp + dtp) / (2 * np));
        tp += dtp;
        fp += dfp;
        rep.roc.push_back({fp / nn, tp / np, items[i].score});
        i = j;
    }
    rep.auc = area;
    return rep;
}

double auc_from_scores(std::span<const double> pos, std::span<const double> neg) {
    const auto items = ranked(pos, neg);
    const double np = static_cast<double>(pos.size()), nn = static_cast<double>(neg.size());
    double tp = 0, area = 0;
    for (std::size_t i = 0; i < items.size();) {
        std::size_t j = i;
        double dtp = 0, dfp = 0;
        while (j < items.size() && items[j].score == items[i].score) {
            (items[j].positive ? dtp : dfp) += 1;
            ++j;
        }
        area += dfp * (2 * tp + dtp);
        tp += dtp;
        i = j;
    }
    return area / (2 * np * nn);
}

EvalReport roc_auc(const ScoreTable& scores, const EvalSplit& split) {
    std::vector<double> pos, neg;
    pos.reserve(split.test_positives.size());
    neg.reserve(split.negatives.size());
    for (const Edge& e : split.test_positives) pos.push_back(scores.score(e));
    for (const Edge& e : split.negatives) neg.push_back(scores.score(e));
    auto rep = roc_from_scores(pos, neg);
    rep.predictor = scores.tag();
    rep.fold = split.fold;
    return rep;
}

EvalReport evaluate_old_new(const OldNewScoreTable& scores, const EvalSplit& split) {
    const auto& g = split.train;
    std::set<OldNewKey> positives;
    for (std::size_t i = 0; i < split.test_positives.size(); ++i) {
        if (split.categories.at(i) != LinkCategory::old_new) continue;
        const Edge& e = split.test_positives[i];
        if (!g.directed())
            positives.insert({g.has_node(e.src) ? e.src : e.dst, e.layer, Direction::any});
        else if (g.has_node(e.src))
            positives.insert({e.src, e.layer, Direction::out});
        else
            positives.insert({e.dst, e.layer, Direction::in});
    }
    std::vector<double> pos, neg;
    const std::vector<Direction> dirs =
        g.directed() ? std::vector<Direction>{Direction::out, Direction::in} : std::vector<Direction>{Direction::any};
    for (NodeId u : g.nodes())
        for (LayerId l = 0; l < g.layer_count(); ++l)
            for (Direction d : dirs) {
                const OldNewKey key{u, l, d};
                (positives.contains(key) ? pos : neg).push_back(scores.score(key));
            }
    auto rep = roc_from_scores(pos, neg);
    rep.predictor = scores.tag();
    rep.old_new = true;
    rep.fold = split.fold;
    return rep;
}

double kendall_tau(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw UsageError("kendall_tau needs equal-length inputs");
    const std::size_t n = a.size();
    double concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double da = a[i] - a[j], db = b[i] - b[j];
            if (da == 0 && db == 0) continue;
            if (da == 0) {
                ties_a += 1;
                continue;
            }
            if (db == 0) {
                ties_b += 1;
                continue;
            }
            ((da > 0) == (db > 0) ? concordant : discordant) += 1;
        }
    const double denom = std::sqrt((concordant + discordant + ties_a) * (concordant + discordant + ties_b));
    return denom > 0 ? (concordant - discordant) / denom : 0.0;
}

CrossValSummary summarize(std::vector<EvalReport> folds, std::span<const std::vector<double>> pos_scores,
                          std::span<const std::vector<double>> neg_scores) {
    CrossValSummary s;
    double total = 0;
    for (const auto& f : folds) total += f.auc;
    s.mean_auc = folds.empty() ? 0.0 : total / static_cast<double>(folds.size());
    std::vector<double> pos, neg;
    for (const auto& v : pos_scores) pos.insert(pos.end(), v.begin(), v.end());
    for (const auto& v : neg_scores) neg.insert(neg.end(), v.begin(), v.end());
    if (!pos.empty() && !neg.empty()) s.pooled_auc = auc_from_scores(pos, neg);
    s.folds = std::move(folds);
    return s;
}

} // namespace muxrule
