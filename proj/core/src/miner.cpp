#include "muxrule/miner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include "muxrule/error.hpp"

namespace muxrule {

void validate(const MinerConfig& cfg) {
    if (cfg.min_support < 1) throw UsageError("minimum support must be at least 1");
    if (cfg.max_nodes < 2) throw UsageError("maximum pattern size must be at least 2 nodes");
    if (cfg.max_nodes > kMaxPatternNodes) throw UsageError("maximum pattern size exceeds the supported limit");
}

std::uint64_t default_min_support(const MultiplexGraph& g) {
    std::uint64_t best = 0;
    for (std::size_t l = 0; l < g.layer_count(); ++l) {
        const auto n = g.layer_node_count(static_cast<LayerId>(l));
        if (n > 0 && (best == 0 || n < best)) best = n;
    }
    return std::max<std::uint64_t>(best, 1);
}

namespace {

using EdgeType = std::tuple<AttrId, AttrId, LayerId>;

template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
    workers = std::max(1u, workers);
    if (workers == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(workers, count); ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = count;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

struct Candidate {
    Pattern pattern;
    SupportResult result;
};

} // namespace

MineResult mine(const MultiplexGraph& g, const MinerConfig& cfg) {
    validate(cfg);
    MineResult out;
    auto& stats = out.stats;
    const bool directed = g.directed();

    // Seeds: one pattern per distinct (attr, attr, layer) edge type in the host.
    std::set<EdgeType> types;
    for (const Edge& e : g.stored_edges()) {
        AttrId a = g.attr(e.src), b = g.attr(e.dst);
        if (!directed && a > b) std::swap(a, b);
        types.emplace(a, b, e.layer);
    }

    std::vector<Candidate> level;
    for (const auto& [a, b, l] : types) level.push_back({canonical_form(Pattern(directed, {a, b}, {{0, 1, l}})), {}});
    std::sort(level.begin(), level.end(),
              [](const Candidate& x, const Candidate& y) { return x.pattern.code() < y.pattern.code(); });
    level.erase(std::unique(level.begin(), level.end(),
                            [](const Candidate& x, const Candidate& y) { return x.pattern.code() == y.pattern.code(); }),
                level.end());
    stats.candidates += level.size();

    auto count_all = [&](std::vector<Candidate>& cands) {
        parallel_for(cands.size(), cfg.workers, [&](std::size_t i) {
            cands[i].result = count_support(cands[i].pattern, g, cfg.min_support, cfg.state_budget);
        });
        stats.counted += cands.size();
        for (const auto& c : cands) stats.states += c.result.states;
    };
    count_all(level);

    std::map<CanonicalCode, std::uint64_t> frequent; // current level
    std::vector<Pattern> current;
    std::set<EdgeType> live_types;
    for (auto& c : level) {
        if (!c.result.frequent) continue;
        c.pattern.support = c.result.support;
        frequent.emplace(c.pattern.code(), c.pattern.support);
        const auto& e = c.pattern.edges().front();
        live_types.emplace(c.pattern.attr(e.src), c.pattern.attr(e.dst), e.layer);
        if (!directed) live_types.emplace(c.pattern.attr(e.dst), c.pattern.attr(e.src), e.layer);
        current.push_back(c.pattern);
    }

    while (!current.empty()) {
        stats.frequent_per_level.push_back(current.size());
        out.patterns.insert(out.patterns.end(), current.begin(), current.end());

        std::map<CanonicalCode, Pattern> children;
        for (const Pattern& p : current) {
            const auto n = static_cast<Slot>(p.node_count());
            auto offer = [&](PatternEdge e, AttrId new_attr) {
                Pattern child = canonical_form(p.with_edge(e, new_attr));
                if (child.edge_count() != p.edge_count() + 1) return; // edge already present
                children.try_emplace(child.code(), std::move(child));
            };
            for (const auto& [a, b, l] : live_types) {
                // Close an edge between existing slots.
                for (Slot i = 0; i < n; ++i)
                    for (Slot j = 0; j < n; ++j) {
                        if (i == j || p.attr(i) != a || p.attr(j) != b) continue;
                        if (!directed && i > j) continue;
                        if (!p.has_edge(i, j, l)) offer({i, j, l}, 0);
                    }
                // Attach a new slot.
                if (p.node_count() < cfg.max_nodes)
                    for (Slot i = 0; i < n; ++i) {
                        if (p.attr(i) == a) offer({i, n, l}, b);
                        if (directed && p.attr(i) == b) offer({n, i, l}, a);
                    }
            }
        }
        stats.candidates += children.size();

        // A child survives only if every connected one-edge-smaller subpattern is frequent.
        std::vector<Candidate> next;
        std::vector<std::vector<std::uint64_t>> parent_support;
        for (auto& [code, child] : children) {
            std::vector<std::uint64_t> parents;
            bool ok = true;
            for (std::size_t i = 0; i < child.edge_count() && ok; ++i) {
                Pattern q = child.without_edge(i);
                if (!q.connected()) continue;
                auto it = frequent.find(q.code());
                if (it == frequent.end())
                    ok = false;
                else
                    parents.push_back(it->second);
            }
            if (!ok) {
                ++stats.pruned_by_subpattern;
                continue;
            }
            next.push_back({child, {}});
            parent_support.push_back(std::move(parents));
        }
        count_all(next);

        frequent.clear();
        current.clear();
        for (std::size_t i = 0; i < next.size(); ++i) {
            auto& c = next[i];
            if (!c.result.frequent) continue;
            c.pattern.support = c.result.support;
            for (std::uint64_t ps : parent_support[i]) {
                ++stats.parent_child_pairs;
                if (c.pattern.support > ps) ++stats.anti_monotone_violations;
            }
            frequent.emplace(c.pattern.code(), c.pattern.support);
            current.push_back(std::move(c.pattern));
        }
    }

    std::sort(out.patterns.begin(), out.patterns.end(),
              [](const Pattern& a, const Pattern& b) { return a.code() < b.code(); });
    return out;
}

} // namespace muxrule
