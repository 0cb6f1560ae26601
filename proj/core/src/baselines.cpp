#include "muxrule/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "muxrule/error.hpp"

namespace muxrule {

namespace {

// Layers linking each pair; undirected pairs are keyed with src < dst.
std::map<std::pair<NodeId, NodeId>, std::vector<LayerId>> pair_layers(const MultiplexGraph& g) {
    std::map<std::pair<NodeId, NodeId>, std::vector<LayerId>> out;
    for (const Edge& e : g.logical_edges()) out[{e.src, e.dst}].push_back(e.layer);
    return out;
}

} // namespace

LayerCooccurrence layer_cooccurrence(const MultiplexGraph& g) {
    const std::size_t nl = g.layer_count();
    std::vector<std::vector<double>> both(nl, std::vector<double>(nl, 0.0));
    std::vector<double> given(nl, 0.0);
    for (const auto& [pair, layers] : pair_layers(g)) {
        for (LayerId a : layers) {
            given[a] += 1;
            for (LayerId b : layers) both[a][b] += 1;
        }
    }
    LayerCooccurrence co;
    co.p.assign(nl, std::vector<double>(nl, 0.0));
    for (std::size_t a = 0; a < nl; ++a)
        for (std::size_t b = 0; b < nl; ++b) co.p[a][b] = given[a] > 0 ? both[a][b] / given[a] : 0.0;
    return co;
}

ScoreTable sharma_scores(const MultiplexGraph& g) {
    const auto co = layer_cooccurrence(g);
    const std::size_t nl = g.layer_count();
    std::vector<ScoredLink> entries;
    for (const auto& [pair, layers] : pair_layers(g)) {
        for (std::size_t target = 0; target < nl; ++target) {
            const auto l1 = static_cast<LayerId>(target);
            if (std::find(layers.begin(), layers.end(), l1) != layers.end()) continue;
            double s = 0.0;
            for (LayerId l2 : layers) s += co(l2, l1);
            entries.push_back({Edge{pair.first, pair.second, l1}, s, {}});
        }
    }
    return ScoreTable("sharma", std::move(entries));
}

std::string_view to_string(Classical c) {
    switch (c) {
    case Classical::cn: return "cn";
    case Classical::aa: return "aa";
    case Classical::ra: return "ra";
    case Classical::pa: return "pa";
    case Classical::ja: return "ja";
    }
    return "cn";
}

Classical parse_classical(std::string_view s) {
    if (s == "cn") return Classical::cn;
    if (s == "aa") return Classical::aa;
    if (s == "ra") return Classical::ra;
    if (s == "pa") return Classical::pa;
    if (s == "ja") return Classical::ja;
    throw UsageError("unknown classical predictor '" + std::string(s) + "'");
}

ScoreTable classical_scores(const SimpleGraph& sg, Classical method) {
    if (sg.edges.empty()) throw UsageError("classical predictors need at least one edge");
    const std::size_t n = sg.node_names.size();
    std::vector<std::vector<NodeId>> nbr(n);
    for (auto [u, v] : sg.edges) {
        nbr[u].push_back(v);
        nbr[v].push_back(u);
    }
    for (auto& list : nbr) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    auto adjacent = [&](NodeId u, NodeId v) { return std::binary_search(nbr[u].begin(), nbr[u].end(), v); };

    std::unordered_map<std::uint64_t, double> scores;
    if (method == Classical::pa) {
        for (std::size_t i = 0; i < sg.nodes.size(); ++i)
            for (std::size_t j = i + 1; j < sg.nodes.size(); ++j) {
                const NodeId u = sg.nodes[i], v = sg.nodes[j];
                const double s = static_cast<double>(nbr[u].size()) * static_cast<double>(nbr[v].size());
                if (s > 0 && !adjacent(u, v)) scores[edge_key(std::min(u, v), std::max(u, v), 0)] = s;
            }
        return ScoreTable::from_keys(std::string(to_string(method)), scores);
    }

    // Walk wedges u - z - v to touch exactly the pairs with a common neighbour.
    for (NodeId z = 0; z < n; ++z) {
        const auto& nz = nbr[z];
        const double dz = static_cast<double>(nz.size());
        double term = 1.0;
        switch (method) {
        case Classical::ra: term = 1.0 / dz; break;
        case Classical::aa: term = nz.size() > 1 ? 1.0 / std::log(dz) : 0.0; break;
        default: break;
        }
        if (method == Classical::aa && nz.size() <= 1) continue;
        for (std::size_t i = 0; i < nz.size(); ++i)
            for (std::size_t j = i + 1; j < nz.size(); ++j) {
                const NodeId u = nz[i], v = nz[j];
                if (adjacent(u, v)) continue;
                scores[edge_key(u, v, 0)] += term;
            }
    }
    if (method == Classical::ja)
        for (auto& [key, cn] : scores) {
            const Edge e = edge_from_key(key);
            const double uni = static_cast<double>(nbr[e.src].size() + nbr[e.dst].size()) - cn;
            cn = cn / uni;
        }
    return ScoreTable::from_keys(std::string(to_string(method)), scores);
}

} // namespace muxrule
