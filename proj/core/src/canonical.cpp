#include <array>
#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "muxrule/pattern.hpp"

namespace muxrule {

namespace {

// Colour refinement: a slot's colour is its attribute refined by the multiset of
// (layer, direction, neighbour colour) around it. Isomorphism-invariant by construction.
std::vector<std::uint32_t> refined_colours(const Pattern& p) {
    const std::size_t n = p.node_count();
    std::vector<std::uint32_t> colour(n);
    for (std::size_t s = 0; s < n; ++s) colour[s] = p.attr(static_cast<Slot>(s));

    for (std::size_t round = 0; round < n; ++round) {
        std::vector<std::vector<std::uint32_t>> sig(n);
        for (std::size_t s = 0; s < n; ++s) sig[s] = {colour[s]};
        std::vector<std::vector<std::uint32_t>> around(n);
        for (const auto& e : p.edges()) {
            const std::uint32_t out_dir = p.directed() ? 1u : 0u;
            const std::uint32_t in_dir = p.directed() ? 2u : 0u;
            around[e.src].insert(around[e.src].end(), {e.layer, out_dir, colour[e.dst]});
            around[e.dst].insert(around[e.dst].end(), {e.layer, in_dir, colour[e.src]});
        }
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<std::array<std::uint32_t, 3>> triples;
            for (std::size_t i = 0; i < around[s].size(); i += 3)
                triples.push_back({around[s][i], around[s][i + 1], around[s][i + 2]});
            std::sort(triples.begin(), triples.end());
            for (const auto& t : triples) sig[s].insert(sig[s].end(), t.begin(), t.end());
        }
        std::map<std::vector<std::uint32_t>, std::uint32_t> rank;
        for (const auto& sg : sig) rank.emplace(sg, 0);
        std::uint32_t r = 0;
        for (auto& [k, v] : rank) v = r++;
        std::vector<std::uint32_t> next(n);
        for (std::size_t s = 0; s < n; ++s) next[s] = rank[sig[s]];
        const bool stable = std::set<std::uint32_t>(next.begin(), next.end()).size() ==
                            std::set<std::uint32_t>(colour.begin(), colour.end()).size();
        colour = std::move(next);
        if (stable && round > 0) break;
    }
    return colour;
}

// Calls visit(pos) for every slot -> position map that lists slots cell by cell in
// colour order, with every permutation inside each cell.
template <typename Visit>
void for_each_ordering(const std::vector<std::uint32_t>& colour, Visit&& visit) {
    const std::size_t n = colour.size();
    std::vector<Slot> slots(n);
    std::iota(slots.begin(), slots.end(), Slot{0});
    std::stable_sort(slots.begin(), slots.end(), [&](Slot a, Slot b) { return colour[a] < colour[b]; });

    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && colour[slots[j]] == colour[slots[i]]) ++j;
        cells.emplace_back(i, j);
        i = j;
    }

    std::vector<Slot> pos(n);
    auto recurse = [&](auto&& self, std::size_t cell) -> void {
        if (cell == cells.size()) {
            for (std::size_t i = 0; i < n; ++i) pos[slots[i]] = static_cast<Slot>(i);
            visit(pos);
            return;
        }
        auto [b, e] = cells[cell];
        std::sort(slots.begin() + static_cast<std::ptrdiff_t>(b), slots.begin() + static_cast<std::ptrdiff_t>(e));
        do {
            self(self, cell + 1);
        } while (std::next_permutation(slots.begin() + static_cast<std::ptrdiff_t>(b),
                                       slots.begin() + static_cast<std::ptrdiff_t>(e)));
    };
    recurse(recurse, 0);
}

void serialize_edges(const Pattern& p, const std::vector<Slot>& pos, std::vector<std::uint32_t>& out) {
    std::vector<std::array<std::uint32_t, 3>> edges;
    edges.reserve(p.edge_count());
    for (const auto& e : p.edges()) {
        std::uint32_t a = pos[e.src], b = pos[e.dst];
        if (!p.directed() && a > b) std::swap(a, b);
        edges.push_back({a, b, e.layer});
    }
    std::sort(edges.begin(), edges.end());
    for (const auto& t : edges) out.insert(out.end(), t.begin(), t.end());
}

} // namespace

CanonicalCode canonical_code(const Pattern& p, std::vector<Slot>* order) {
    const std::size_t n = p.node_count();
    CanonicalCode head{p.directed() ? 1u : 0u, static_cast<std::uint32_t>(n),
                       static_cast<std::uint32_t>(p.edge_count())};
    const auto colour = refined_colours(p);

    CanonicalCode best;
    std::vector<std::uint32_t> scratch;
    for_each_ordering(colour, [&](const std::vector<Slot>& pos) {
        scratch.clear();
        serialize_edges(p, pos, scratch);
        if (best.empty() || scratch < best) {
            best = scratch;
            if (order) *order = pos;
        }
    });
    if (n == 0 && order) order->clear();

    // Attributes in canonical position order.
    std::vector<std::uint32_t> attrs(n);
    if (n > 0) {
        std::vector<Slot> pos;
        if (order)
            pos = *order;
        else
            for_each_ordering(colour, [&](const std::vector<Slot>& q) {
                if (pos.empty()) pos = q;
            });
        for (std::size_t s = 0; s < n; ++s) attrs[pos[s]] = p.attr(static_cast<Slot>(s));
    }
    CanonicalCode code = head;
    code.insert(code.end(), attrs.begin(), attrs.end());
    code.insert(code.end(), best.begin(), best.end());
    return code;
}

std::vector<std::vector<Slot>> automorphisms(const Pattern& p) {
    const auto colour = refined_colours(p);

    // Any two orderings that serialize identically differ by an automorphism; collect
    // orderings with the identity's serialization relative to a fixed base ordering.
    std::vector<Slot> base;
    std::vector<std::uint32_t> base_code;
    std::vector<std::vector<Slot>> out;
    std::vector<std::uint32_t> scratch;
    for_each_ordering(colour, [&](const std::vector<Slot>& pos) {
        scratch.clear();
        serialize_edges(p, pos, scratch);
        if (base.empty()) {
            base = pos;
            base_code = scratch;
        }
        if (scratch != base_code) return;
        // pos and base produce the same labelled pattern: slot s under pos sits where
        // slot t sits under base, so s -> t is an automorphism.
        std::vector<Slot> inv_base(base.size());
        for (std::size_t s = 0; s < base.size(); ++s) inv_base[base[s]] = static_cast<Slot>(s);
        std::vector<Slot> perm(pos.size());
        for (std::size_t s = 0; s < pos.size(); ++s) perm[s] = inv_base[pos[s]];
        out.push_back(std::move(perm));
    });
    std::sort(out.begin(), out.end());
    return out;
}

Pattern canonical_form(const Pattern& p) {
    std::vector<Slot> order;
    canonical_code(p, &order);
    return p.relabeled(order);
}

std::string code_string(const Pattern& p, const Dictionary& attrs, const Dictionary& layers) {
    const Pattern c = canonical_form(p);
    std::string out = c.directed() ? "D|" : "U|";
    for (std::size_t s = 0; s < c.node_count(); ++s) {
        if (s) out += ',';
        out += attrs.name(c.attr(static_cast<Slot>(s)));
    }
    out += '|';
    bool first = true;
    for (const auto& e : c.edges()) {
        if (!first) out += ',';
        first = false;
        out += std::to_string(e.src);
        out += c.directed() ? '>' : '-';
        out += std::to_string(e.dst);
        out += ':';
        out += layers.name(e.layer);
    }
    return out;
}

} // namespace muxrule
