#include "muxrule/matcher.hpp"

#include <algorithm>
#include <limits>

namespace muxrule {

Matcher::Matcher(const Pattern& p, const MultiplexGraph& g, std::uint64_t budget)
    : pattern_(p), graph_(g), budget_(budget) {
    const std::size_t n = p.node_count();
    const std::size_t nl = g.layer_count();
    need_.assign(n, std::vector<std::pair<std::uint32_t, std::uint32_t>>(nl, {0, 0}));
    bool feasible = true;
    for (const auto& e : p.edges()) {
        if (e.layer >= nl) {
            feasible = false;
            continue;
        }
        if (p.directed()) {
            ++need_[e.src][e.layer].first;
            ++need_[e.dst][e.layer].second;
        } else {
            ++need_[e.src][e.layer].first;
            ++need_[e.dst][e.layer].first;
        }
    }
    if (!feasible)
        for (auto& per_slot : need_)
            for (auto& d : per_slot) d.first = std::numeric_limits<std::uint32_t>::max();
    plans_.resize(n);
    mapping_.assign(n, 0);
}

bool Matcher::admissible(Slot s, NodeId v) const {
    if (!graph_.has_node(v) || graph_.attr(v) != pattern_.attr(s)) return false;
    const auto& need = need_[s];
    for (std::size_t l = 0; l < need.size(); ++l) {
        const auto [out, in] = need[l];
        if (out == 0 && in == 0) continue;
        if (out == std::numeric_limits<std::uint32_t>::max()) return false;
        if (graph_.out_neighbors(v, static_cast<LayerId>(l)).size() < out) return false;
        if (graph_.in_neighbors(v, static_cast<LayerId>(l)).size() < in) return false;
    }
    return true;
}

const std::vector<Matcher::Step>& Matcher::plan_for(Slot root) {
    auto& plan = plans_[root];
    if (!plan.empty()) return plan;
    const std::size_t n = pattern_.node_count();
    std::vector<char> placed(n, 0);
    std::vector<std::size_t> degree(n, 0);
    for (const auto& e : pattern_.edges()) {
        ++degree[e.src];
        ++degree[e.dst];
    }
    plan.push_back(Step{root, root, 0, true, {}});
    placed[root] = 1;
    for (std::size_t k = 1; k < n; ++k) {
        Slot best = 0;
        std::size_t best_links = 0, best_deg = 0;
        bool have = false;
        for (std::size_t s = 0; s < n; ++s) {
            if (placed[s]) continue;
            std::size_t links = 0;
            for (const auto& e : pattern_.edges())
                if ((e.src == s && placed[e.dst]) || (e.dst == s && placed[e.src])) ++links;
            if (links == 0) continue;
            if (!have || links > best_links || (links == best_links && degree[s] > best_deg)) {
                best = static_cast<Slot>(s);
                best_links = links;
                best_deg = degree[s];
                have = true;
            }
        }
        if (!have) throw UsageError("pattern is not connected");
        Step step;
        step.slot = best;
        bool anchored = false;
        for (const auto& e : pattern_.edges()) {
            const bool out_edge = e.src == best && placed[e.dst]; // best -> other
            const bool in_edge = e.dst == best && placed[e.src];  // other -> best
            if (!out_edge && !in_edge) continue;
            const Slot other = out_edge ? e.dst : e.src;
            if (!anchored) {
                anchored = true;
                step.anchor = other;
                step.layer = e.layer;
                // other -> best: best is among the anchor's out-neighbours
                step.from_out = !pattern_.directed() || in_edge;
            } else {
                step.checks.emplace_back(other, e.layer, out_edge);
            }
        }
        placed[best] = 1;
        plan.push_back(std::move(step));
    }
    return plan;
}

void Matcher::charge() {
    ++states_;
    if (budget_ != 0 && states_ > budget_)
        throw ResourceError("embedding enumeration exceeded the budget of " + std::to_string(budget_) +
                            " partial states");
}

bool Matcher::extend(const std::vector<Step>& plan, std::size_t depth,
                     const std::function<bool(std::span<const NodeId>)>& visit) {
    if (depth == plan.size()) return visit(mapping_);
    const Step& st = plan[depth];
    const NodeId anchor = mapping_[st.anchor];
    const auto cands = st.from_out ? graph_.out_neighbors(anchor, st.layer) : graph_.in_neighbors(anchor, st.layer);
    const std::size_t placed = depth;
    for (NodeId v : cands) {
        charge();
        bool clash = false;
        for (std::size_t i = 0; i < placed; ++i)
            if (mapping_[plan[i].slot] == v) {
                clash = true;
                break;
            }
        if (clash || !admissible(st.slot, v)) continue;
        bool ok = true;
        for (const auto& [other, layer, slot_is_src] : st.checks) {
            const NodeId w = mapping_[other];
            if (!(slot_is_src ? graph_.has_edge(v, w, layer) : graph_.has_edge(w, v, layer))) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        mapping_[st.slot] = v;
        if (!extend(plan, depth + 1, visit)) return false;
    }
    return true;
}

bool Matcher::for_each_rooted(Slot root, NodeId v, const std::function<bool(std::span<const NodeId>)>& visit) {
    charge();
    if (!admissible(root, v)) return true;
    const auto& plan = plan_for(root);
    mapping_[root] = v;
    return extend(plan, 1, visit);
}

bool Matcher::for_each(const std::function<bool(std::span<const NodeId>)>& visit) {
    const std::size_t n = pattern_.node_count();
    if (n == 0) return true;
    // Root at the slot with the most incident edges.
    std::vector<std::size_t> degree(n, 0);
    for (const auto& e : pattern_.edges()) {
        ++degree[e.src];
        ++degree[e.dst];
    }
    const auto root = static_cast<Slot>(std::max_element(degree.begin(), degree.end()) - degree.begin());
    for (NodeId v : graph_.nodes())
        if (!for_each_rooted(root, v, visit)) return false;
    return true;
}

bool Matcher::find_rooted(Slot root, NodeId v, std::span<NodeId> out) {
    bool found = false;
    for_each_rooted(root, v, [&](std::span<const NodeId> m) {
        std::copy(m.begin(), m.end(), out.begin());
        found = true;
        return false;
    });
    return found;
}

std::vector<Embedding> embeddings(const Pattern& p, const MultiplexGraph& g) {
    std::vector<Embedding> out;
    Matcher m(p, g);
    m.for_each([&](std::span<const NodeId> nodes) {
        out.push_back(Embedding{std::vector<NodeId>(nodes.begin(), nodes.end())});
        return true;
    });
    std::sort(out.begin(), out.end());
    return out;
}

SupportResult count_support(const Pattern& p, const MultiplexGraph& g, std::uint64_t threshold,
                            std::uint64_t budget) {
    const std::size_t n = p.node_count();
    SupportResult res;
    if (n == 0) {
        res.frequent = threshold == 0;
        return res;
    }
    Matcher m(p, g, budget);

    std::vector<std::vector<NodeId>> cands(n);
    for (std::size_t s = 0; s < n; ++s)
        for (NodeId v : g.nodes())
            if (m.admissible(static_cast<Slot>(s), v)) cands[s].push_back(v);

    std::uint64_t bound = std::numeric_limits<std::uint64_t>::max();
    for (const auto& c : cands) bound = std::min<std::uint64_t>(bound, c.size());
    if (bound == 0 || (threshold > 0 && bound < threshold)) {
        res.support = bound;
        res.frequent = bound >= threshold;
        res.states = m.states();
        return res;
    }

    std::vector<std::vector<char>> image(n, std::vector<char>(g.universe_size(), 0));
    std::vector<std::uint64_t> count(n, 0);
    std::vector<NodeId> found(n);
    std::uint64_t unresolved = 0;
    // Marks the images of one embedding. A fresh image of the slot being scanned is a
    // candidate not yet visited, so it leaves the unresolved pool.
    auto record = [&](Slot scanning) {
        for (std::size_t s = 0; s < n; ++s)
            if (!image[s][found[s]]) {
                image[s][found[s]] = 1;
                ++count[s];
                if (s == scanning) --unresolved;
            }
    };

    // Slots with the fewest candidates first: they fail fastest.
    std::vector<Slot> order(n);
    for (std::size_t s = 0; s < n; ++s) order[s] = static_cast<Slot>(s);
    std::stable_sort(order.begin(), order.end(), [&](Slot a, Slot b) { return cands[a].size() < cands[b].size(); });

    std::uint64_t support = std::numeric_limits<std::uint64_t>::max();
    for (Slot s : order) {
        const auto& cs = cands[s];
        unresolved = 0;
        for (NodeId v : cs)
            if (!image[s][v]) ++unresolved;
        for (NodeId v : cs) {
            if (image[s][v]) continue;
            if (m.find_rooted(s, v, found))
                record(s); // also resolves v itself
            else
                --unresolved;
            if (threshold > 0 && count[s] + unresolved < threshold) {
                res.support = count[s] + unresolved;
                res.frequent = false;
                res.states = m.states();
                return res;
            }
        }
        support = std::min(support, count[s]);
        if (support == 0) break;
    }
    res.support = support;
    res.frequent = support >= threshold;
    res.states = m.states();
    return res;
}

std::uint64_t min_image_support(const Pattern& p, const MultiplexGraph& g) { return count_support(p, g).support; }

} // namespace muxrule
