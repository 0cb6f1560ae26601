#include "muxrule/graph.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>

#include "muxrule/error.hpp"

namespace muxrule {

Dictionary::Dictionary(std::vector<std::string> names) : names_(std::move(names)) {
    std::sort(names_.begin(), names_.end());
    names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
    index_.reserve(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) index_.emplace(names_[i], i);
}

std::size_t Dictionary::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? names_.size() : it->second;
}

MultiplexGraph::MultiplexGraph(bool directed, Dictionary nodes, Dictionary layers, Dictionary attrs,
                               std::vector<AttrId> node_attr, std::span<const Edge> edges,
                               std::span<const NodeId> extra_nodes)
    : directed_(directed),
      node_names_(std::move(nodes)),
      layer_names_(std::move(layers)),
      attr_names_(std::move(attrs)),
      node_attr_(std::move(node_attr)) {
    const std::size_t n = node_names_.size();
    const std::size_t nl = layer_names_.size();
    if (n >= (1u << 24)) throw UsageError("graph has too many nodes (limit 2^24)");
    if (node_attr_.size() != n) throw UsageError("node attribute vector does not match node dictionary");
    if (attr_names_.size() == 0 && n > 0) throw UsageError("attribute dictionary is empty");

    present_.assign(n, 0);
    edges_.reserve(directed ? edges.size() : 2 * edges.size());
    for (const Edge& e : edges) {
        if (e.src >= n || e.dst >= n || e.layer >= nl) throw UsageError("edge references unknown node or layer");
        if (e.src == e.dst) continue;
        edges_.push_back(e);
        if (!directed) edges_.push_back(Edge{e.dst, e.src, e.layer});
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    for (NodeId u : extra_nodes) {
        if (u >= n) throw UsageError("extra node out of range");
        present_[u] = 1;
    }

    edge_set_.reserve(edges_.size() * 2);
    out_.assign(n * nl, {});
    in_.assign(n * nl, {});
    layer_edges_.assign(nl, 0);
    std::vector<std::vector<char>> layer_touch(nl, std::vector<char>(n, 0));
    for (const Edge& e : edges_) {
        present_[e.src] = present_[e.dst] = 1;
        edge_set_.insert(edge_key(e));
        out_[slot(e.src, e.layer)].push_back(e.dst);
        in_[slot(e.dst, e.layer)].push_back(e.src);
        ++layer_edges_[e.layer];
        layer_touch[e.layer][e.src] = layer_touch[e.layer][e.dst] = 1;
    }
    if (!directed_)
        for (auto& c : layer_edges_) c /= 2;
    for (auto& v : in_) std::sort(v.begin(), v.end());
    layer_nodes_.assign(nl, 0);
    for (std::size_t l = 0; l < nl; ++l)
        layer_nodes_[l] = static_cast<std::size_t>(std::count(layer_touch[l].begin(), layer_touch[l].end(), 1));

    for (NodeId u = 0; u < n; ++u)
        if (present_[u]) nodes_.push_back(u);
}

MultiplexGraph MultiplexGraph::with_edges(const MultiplexGraph& like, std::span<const Edge> edges,
                                          std::span<const NodeId> extra_nodes) {
    return MultiplexGraph(like.directed_, like.node_names_, like.layer_names_, like.attr_names_, like.node_attr_,
                          edges, extra_nodes);
}

std::vector<Edge> MultiplexGraph::logical_edges() const {
    if (directed_) return edges_;
    std::vector<Edge> out;
    out.reserve(edges_.size() / 2);
    for (const Edge& e : edges_)
        if (e.src < e.dst) out.push_back(e);
    return out;
}

namespace {

using NamedEdge = std::tuple<std::string, std::string, std::string>;

std::set<NamedEdge> named_edges(const MultiplexGraph& g) {
    std::set<NamedEdge> out;
    for (const Edge& e : g.stored_edges())
        out.emplace(g.node_names().name(e.src), g.node_names().name(e.dst), g.layer_names().name(e.layer));
    return out;
}

std::set<std::pair<std::string, std::string>> named_nodes(const MultiplexGraph& g) {
    std::set<std::pair<std::string, std::string>> out;
    for (NodeId u : g.nodes()) out.emplace(g.node_names().name(u), g.attr_names().name(g.attr(u)));
    return out;
}

std::set<std::string> used_layers(const MultiplexGraph& g) {
    std::set<std::string> out;
    for (const Edge& e : g.stored_edges()) out.insert(g.layer_names().name(e.layer));
    return out;
}

} // namespace

bool same_graph(const MultiplexGraph& a, const MultiplexGraph& b) {
    return a.directed() == b.directed() && named_nodes(a) == named_nodes(b) && used_layers(a) == used_layers(b) &&
           named_edges(a) == named_edges(b);
}

MultiplexGraph SimpleGraph::as_multiplex(std::string layer_name) const {
    std::vector<Edge> edges;
    edges.reserve(this->edges.size());
    for (auto [u, v] : this->edges) edges.push_back(Edge{u, v, 0});
    Dictionary attrs(std::vector<std::string>{std::string(kDefaultAttribute)});
    return MultiplexGraph(directed, node_names, Dictionary({std::move(layer_name)}), std::move(attrs),
                          std::vector<AttrId>(node_names.size(), 0), edges, nodes);
}

SimpleGraph collapse(const MultiplexGraph& g, bool keep_direction) {
    SimpleGraph sg;
    sg.directed = keep_direction && g.directed();
    sg.node_names = g.node_names();
    sg.nodes.assign(g.nodes().begin(), g.nodes().end());
    for (const Edge& e : g.stored_edges()) {
        if (sg.directed)
            sg.edges.emplace_back(e.src, e.dst);
        else
            sg.edges.emplace_back(std::min(e.src, e.dst), std::max(e.src, e.dst));
    }
    std::sort(sg.edges.begin(), sg.edges.end());
    sg.edges.erase(std::unique(sg.edges.begin(), sg.edges.end()), sg.edges.end());
    return sg;
}

} // namespace muxrule
