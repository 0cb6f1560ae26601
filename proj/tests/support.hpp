#pragma once

// Shared fixtures and brute-force oracles. Oracles here avoid the library's matcher,
// canonicalizer and miner so they can check them.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "muxrule/graph.hpp"
#include "muxrule/graph_io.hpp"
#include "muxrule/pattern.hpp"

namespace muxtest {

using namespace muxrule;

struct RandomGraphSpec {
    std::size_t nodes = 10;
    std::size_t layers = 2;
    std::size_t attrs = 1;
    double p = 0.2;
    bool directed = true;
};

inline MultiplexGraph random_graph(const RandomGraphSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<EdgeRecord> edges;
    for (std::size_t u = 0; u < spec.nodes; ++u)
        for (std::size_t v = 0; v < spec.nodes; ++v) {
            if (u == v || (!spec.directed && u > v)) continue;
            for (std::size_t l = 0; l < spec.layers; ++l)
                if (unit(rng) < spec.p)
                    edges.push_back({"n" + std::to_string(u), "n" + std::to_string(v), "l" + std::to_string(l)});
        }
    std::vector<std::pair<std::string, std::string>> attrs;
    if (spec.attrs > 1)
        for (std::size_t u = 0; u < spec.nodes; ++u)
            attrs.emplace_back("n" + std::to_string(u), "a" + std::to_string(rng() % spec.attrs));
    return std::move(build_graphs({edges}, attrs, spec.directed).front());
}

inline MultiplexGraph graph_from(std::vector<EdgeRecord> edges, bool directed,
                                 std::vector<std::pair<std::string, std::string>> attrs = {}) {
    return std::move(build_graphs({std::move(edges)}, attrs, directed).front());
}

inline NodeId node(const MultiplexGraph& g, const std::string& name) {
    return static_cast<NodeId>(g.node_names().find(name));
}
inline LayerId layer(const MultiplexGraph& g, const std::string& name) {
    return static_cast<LayerId>(g.layer_names().find(name));
}

/// Every injective slot -> node map that preserves attributes and pattern edges.
/// Undirected pattern edges are checked against the symmetric host.
inline std::vector<std::vector<NodeId>> brute_embeddings(const Pattern& p, const MultiplexGraph& g) {
    std::vector<std::vector<NodeId>> out;
    const auto nodes = g.nodes();
    std::vector<NodeId> map(p.node_count());
    auto rec = [&](auto&& self, std::size_t s) -> void {
        if (s == p.node_count()) {
            for (const auto& e : p.edges())
                if (!g.has_edge(map[e.src], map[e.dst], e.layer)) return;
            out.push_back(map);
            return;
        }
        for (NodeId v : nodes) {
            if (g.attr(v) != p.attr(static_cast<Slot>(s))) continue;
            if (std::find(map.begin(), map.begin() + static_cast<std::ptrdiff_t>(s), v) !=
                map.begin() + static_cast<std::ptrdiff_t>(s))
                continue;
            map[s] = v;
            self(self, s + 1);
        }
    };
    if (p.node_count() > 0) rec(rec, 0);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::uint64_t brute_mis(const Pattern& p, const MultiplexGraph& g) {
    const auto embs = brute_embeddings(p, g);
    if (embs.empty()) return 0;
    std::uint64_t best = UINT64_MAX;
    for (std::size_t s = 0; s < p.node_count(); ++s) {
        std::set<NodeId> img;
        for (const auto& m : embs) img.insert(m[s]);
        best = std::min<std::uint64_t>(best, img.size());
    }
    return best;
}

/// Minimum serialization over every slot permutation.
inline std::vector<std::uint32_t> brute_key(const Pattern& p) {
    const std::size_t n = p.node_count();
    std::vector<Slot> perm(n);
    std::iota(perm.begin(), perm.end(), Slot{0});
    std::vector<std::uint32_t> best;
    do {
        std::vector<std::uint32_t> key{p.directed() ? 1u : 0u, static_cast<std::uint32_t>(n)};
        std::vector<std::uint32_t> attrs(n);
        for (std::size_t s = 0; s < n; ++s) attrs[perm[s]] = p.attr(static_cast<Slot>(s));
        key.insert(key.end(), attrs.begin(), attrs.end());
        std::vector<std::array<std::uint32_t, 3>> edges;
        for (const auto& e : p.edges()) {
            std::uint32_t a = perm[e.src], b = perm[e.dst];
            if (!p.directed() && a > b) std::swap(a, b);
            edges.push_back({a, b, e.layer});
        }
        std::sort(edges.begin(), edges.end());
        for (const auto& t : edges) key.insert(key.end(), t.begin(), t.end());
        if (best.empty() || key < best) best = key;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Isomorphism by trying every bijection.
inline bool brute_isomorphic(const Pattern& a, const Pattern& b) {
    if (a.directed() != b.directed() || a.node_count() != b.node_count() || a.edge_count() != b.edge_count())
        return false;
    return brute_key(a) == brute_key(b);
}

/// Exhaustive generate-and-filter: every connected edge subset of the host spanning at
/// most s nodes, turned into a pattern, deduplicated by brute_key, filtered by brute MIS.
inline std::map<std::vector<std::uint32_t>, std::uint64_t> brute_mine(const MultiplexGraph& g, std::uint64_t sigma,
                                                                      std::size_t s) {
    std::vector<Edge> edges = g.logical_edges();
    std::map<std::vector<std::uint32_t>, Pattern> seen;
    std::vector<std::size_t> chosen;

    auto emit = [&] {
        std::vector<NodeId> nodes;
        for (std::size_t i : chosen) {
            nodes.push_back(edges[i].src);
            nodes.push_back(edges[i].dst);
        }
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        std::vector<AttrId> attrs;
        for (NodeId v : nodes) attrs.push_back(g.attr(v));
        std::vector<PatternEdge> pe;
        auto slot = [&](NodeId v) {
            return static_cast<Slot>(std::lower_bound(nodes.begin(), nodes.end(), v) - nodes.begin());
        };
        for (std::size_t i : chosen) pe.push_back({slot(edges[i].src), slot(edges[i].dst), edges[i].layer});
        Pattern p(g.directed(), attrs, pe);
        seen.emplace(brute_key(p), p);
    };

    // Grow connected edge sets from each start edge; only add edges with larger index than
    // the start so each set is rooted at its smallest edge, and dedupe sets explicitly.
    std::set<std::vector<std::size_t>> visited;
    auto grow = [&](auto&& self) -> void {
        std::vector<std::size_t> key = chosen;
        std::sort(key.begin(), key.end());
        if (!visited.insert(key).second) return;
        emit();
        std::set<NodeId> touched;
        for (std::size_t i : chosen) {
            touched.insert(edges[i].src);
            touched.insert(edges[i].dst);
        }
        for (std::size_t j = chosen.front() + 1; j < edges.size(); ++j) {
            if (std::find(chosen.begin(), chosen.end(), j) != chosen.end()) continue;
            const bool a = touched.contains(edges[j].src), b = touched.contains(edges[j].dst);
            if (!a && !b) continue;
            if (touched.size() + (a ? 0 : 1) + (b ? 0 : 1) > s) continue;
            chosen.push_back(j);
            self(self);
            chosen.pop_back();
        }
    };
    for (std::size_t i = 0; i < edges.size(); ++i) {
        chosen = {i};
        grow(grow);
    }

    std::map<std::vector<std::uint32_t>, std::uint64_t> out;
    for (const auto& [key, p] : seen) {
        const auto sup = brute_mis(p, g);
        if (sup >= sigma) out.emplace(key, sup);
    }
    return out;
}

} // namespace muxtest
