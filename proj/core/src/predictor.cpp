#include "muxrule/predictor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "muxrule/error.hpp"
#include "muxrule/matcher.hpp"

namespace muxrule {

std::string_view to_string(Weighting w) {
    switch (w) {
    case Weighting::count: return "count";
    case Weighting::conf: return "conf";
    case Weighting::lift: return "lift";
    case Weighting::conf_mean: return "conf-mean";
    case Weighting::lift_mean: return "lift-mean";
    }
    return "conf";
}

Weighting parse_weighting(std::string_view s) {
    if (s == "count") return Weighting::count;
    if (s == "conf") return Weighting::conf;
    if (s == "lift") return Weighting::lift;
    if (s == "conf-mean") return Weighting::conf_mean;
    if (s == "lift-mean") return Weighting::lift_mean;
    throw UsageError("unknown weighting scheme '" + std::string(s) + "'");
}

namespace {

bool uses_lift(Weighting w) { return w == Weighting::lift || w == Weighting::lift_mean; }

// Keys (with multiplicity) that one rule produces. Sorted.
using Hits = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

template <typename KeyFn>
Hits collect_hits(const MultiplexGraph& g, const Rule& r, bool per_embedding, KeyFn&& key_of) {
    std::unordered_map<std::uint64_t, std::uint64_t> hits;
    Matcher m(r.antecedent, g);
    m.for_each([&](std::span<const NodeId> phi) {
        if (auto k = key_of(phi)) ++hits[*k];
        return true;
    });
    Hits out(hits.begin(), hits.end());
    if (!per_embedding)
        for (auto& h : out) h.second = 1;
    std::sort(out.begin(), out.end());
    return out;
}

template <typename Fn>
std::vector<Hits> per_rule(const std::vector<const Rule*>& rules, unsigned workers, Fn&& fn) {
    std::vector<Hits> out(rules.size());
    workers = std::max(1u, workers);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    auto work = [&] {
        for (std::size_t i = next++; i < rules.size(); i = next++) {
            try {
                out[i] = fn(*rules[i]);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                next = rules.size();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

struct Accum {
    double count = 0;
    double sum = 0;
    std::vector<std::size_t> rules;
};

// Merges in rule order so floating-point sums do not depend on scheduling.
std::map<std::uint64_t, Accum> aggregate(const std::vector<const Rule*>& rules, const std::vector<Hits>& hits,
                                         Weighting w, bool provenance) {
    std::map<std::uint64_t, Accum> acc;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const Rule& r = *rules[i];
        const double weight = uses_lift(w) ? r.lift : r.confidence;
        for (const auto& [key, mult] : hits[i]) {
            auto& a = acc[key];
            a.count += static_cast<double>(mult);
            a.sum += weight * static_cast<double>(mult);
            if (provenance) a.rules.push_back(r.id);
        }
    }
    return acc;
}

double finish(const Accum& a, Weighting w) {
    switch (w) {
    case Weighting::count: return a.count;
    case Weighting::conf:
    case Weighting::lift: return a.sum;
    case Weighting::conf_mean:
    case Weighting::lift_mean: return a.sum / a.count;
    }
    return a.sum;
}

std::vector<const Rule*> select(const std::vector<Rule>& rules, bool new_node, Weighting w) {
    std::vector<const Rule*> out;
    for (const auto& r : rules) {
        if (r.new_node != new_node) continue;
        if (uses_lift(w) && !std::isfinite(r.lift)) continue;
        out.push_back(&r);
    }
    return out;
}

std::uint64_t old_new_key(NodeId u, LayerId l, Direction d) {
    return (static_cast<std::uint64_t>(u) << 24) | (static_cast<std::uint64_t>(l) << 8) | static_cast<std::uint8_t>(d);
}

} // namespace

ScoreTable score_links(const MultiplexGraph& g, const std::vector<Rule>& rules, const PredictOptions& opt) {
    const auto chosen = select(rules, false, opt.weighting);
    const bool directed = g.directed();
    auto hits = per_rule(chosen, opt.workers, [&](const Rule& r) {
        const auto d = r.delta_edge;
        return collect_hits(g, r, opt.per_embedding, [&](std::span<const NodeId> phi) -> std::optional<std::uint64_t> {
            NodeId u = phi[d.src], v = phi[d.dst];
            if (g.has_edge(u, v, d.layer)) return std::nullopt;
            if (!directed && u > v) std::swap(u, v);
            return edge_key(u, v, d.layer);
        });
    });
    const auto acc = aggregate(chosen, hits, opt.weighting, opt.provenance);
    std::vector<ScoredLink> entries;
    entries.reserve(acc.size());
    for (const auto& [key, a] : acc) entries.push_back({edge_from_key(key), finish(a, opt.weighting), a.rules});
    return ScoreTable("magma-" + std::string(to_string(opt.weighting)), std::move(entries));
}

OldNewScoreTable score_old_new(const MultiplexGraph& g, const std::vector<Rule>& rules, const PredictOptions& opt) {
    const auto chosen = select(rules, true, opt.weighting);
    auto hits = per_rule(chosen, opt.workers, [&](const Rule& r) {
        const auto d = r.delta_edge;
        const Slot fresh = static_cast<Slot>(r.consequent.node_count() - 1);
        const Slot anchor = d.src == fresh ? d.dst : d.src;
        Direction dir = Direction::any;
        if (g.directed()) dir = d.src == anchor ? Direction::out : Direction::in;
        return collect_hits(g, r, opt.per_embedding, [&](std::span<const NodeId> phi) -> std::optional<std::uint64_t> {
            return old_new_key(phi[anchor], d.layer, dir);
        });
    });
    const auto acc = aggregate(chosen, hits, opt.weighting, true);
    std::unordered_map<std::size_t, const Rule*> by_id;
    for (const Rule* r : chosen) by_id.emplace(r->id, r);

    std::vector<OldNewEntry> entries;
    for (const auto& [key, a] : acc) {
        OldNewEntry e;
        e.key = {static_cast<NodeId>(key >> 24), static_cast<LayerId>((key >> 8) & 0xFFFF),
                 static_cast<Direction>(key & 0xFF)};
        e.score = finish(a, opt.weighting);
        for (std::size_t id : a.rules) {
            const Rule& r = *by_id.at(id);
            e.new_node_attrs.push_back(r.consequent.attr(static_cast<Slot>(r.consequent.node_count() - 1)));
        }
        std::sort(e.new_node_attrs.begin(), e.new_node_attrs.end());
        e.new_node_attrs.erase(std::unique(e.new_node_attrs.begin(), e.new_node_attrs.end()), e.new_node_attrs.end());
        if (opt.provenance) e.rules = a.rules;
        entries.push_back(std::move(e));
    }
    return OldNewScoreTable("magma-old-new-" + std::string(to_string(opt.weighting)), std::move(entries));
}

} // namespace muxrule
