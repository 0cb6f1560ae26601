#include "muxrule/pattern.hpp"

#include <algorithm>
#include <numeric>

#include "muxrule/error.hpp"

namespace muxrule {

Pattern::Pattern(bool directed, std::vector<AttrId> attrs, std::vector<PatternEdge> edges)
    : directed_(directed), attrs_(std::move(attrs)), edges_(std::move(edges)) {
    normalize();
}

void Pattern::normalize() {
    if (!directed_)
        for (auto& e : edges_)
            if (e.src > e.dst) std::swap(e.src, e.dst);
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    code_.clear();
}

bool Pattern::has_edge(Slot a, Slot b, LayerId l) const {
    if (!directed_ && a > b) std::swap(a, b);
    return std::binary_search(edges_.begin(), edges_.end(), PatternEdge{a, b, l});
}

bool Pattern::connected() const {
    const std::size_t n = attrs_.size();
    if (n == 0) return false;
    std::vector<Slot> parent(n);
    std::iota(parent.begin(), parent.end(), Slot{0});
    auto find = [&](Slot x) {
        while (parent[x] != x) x = parent[x];
        return x;
    };
    std::size_t comps = n;
    for (const auto& e : edges_) {
        Slot a = find(e.src), b = find(e.dst);
        if (a != b) {
            parent[a] = b;
            --comps;
        }
    }
    return comps == 1;
}

Pattern Pattern::with_edge(PatternEdge e, AttrId new_attr) const {
    Pattern out = *this;
    const auto n = static_cast<Slot>(attrs_.size());
    if (e.src == n || e.dst == n) out.attrs_.push_back(new_attr);
    out.edges_.push_back(e);
    out.normalize();
    out.support = 0;
    return out;
}

Pattern Pattern::without_edge(std::size_t index) const {
    std::vector<PatternEdge> edges = edges_;
    edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(index));
    std::vector<char> used(attrs_.size(), 0);
    for (const auto& e : edges) used[e.src] = used[e.dst] = 1;
    std::vector<Slot> remap(attrs_.size(), 0);
    std::vector<AttrId> attrs;
    for (std::size_t s = 0; s < attrs_.size(); ++s) {
        if (!used[s]) continue;
        remap[s] = static_cast<Slot>(attrs.size());
        attrs.push_back(attrs_[s]);
    }
    for (auto& e : edges) e = {remap[e.src], remap[e.dst], e.layer};
    return Pattern(directed_, std::move(attrs), std::move(edges));
}

Pattern Pattern::relabeled(const std::vector<Slot>& perm) const {
    std::vector<AttrId> attrs(attrs_.size());
    for (std::size_t s = 0; s < attrs_.size(); ++s) attrs[perm[s]] = attrs_[s];
    std::vector<PatternEdge> edges;
    edges.reserve(edges_.size());
    for (const auto& e : edges_) edges.push_back({perm[e.src], perm[e.dst], e.layer});
    Pattern out(directed_, std::move(attrs), std::move(edges));
    out.support = support;
    return out;
}

const CanonicalCode& Pattern::code() const {
    if (code_.empty()) code_ = canonical_code(*this);
    return code_;
}

void validate(const Pattern& p) {
    const std::size_t n = p.node_count();
    if (n < 2) throw UsageError("pattern needs at least two nodes");
    if (n > kMaxPatternNodes) throw UsageError("pattern exceeds the node limit");
    if (p.edge_count() == 0) throw UsageError("pattern has no edges");
    for (const auto& e : p.edges()) {
        if (e.src >= n || e.dst >= n) throw UsageError("pattern edge references an unknown slot");
        if (e.src == e.dst) throw UsageError("pattern has a self-loop");
    }
    if (!p.connected()) throw UsageError("pattern is not connected");
}

} // namespace muxrule
