#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace muxrule {

using NodeId = std::uint32_t;
using LayerId = std::uint16_t;
using AttrId = std::uint16_t;

/// Attribute given to nodes that the attribute file does not mention.
inline constexpr std::string_view kDefaultAttribute = "·";

struct Edge {
    NodeId src = 0;
    NodeId dst = 0;
    LayerId layer = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Packs an edge into a single 64-bit key (32 + 16 + 16 bits; node ids must fit in 24 bits).
constexpr std::uint64_t edge_key(NodeId u, NodeId v, LayerId l) noexcept {
    return (static_cast<std::uint64_t>(u) << 40) | (static_cast<std::uint64_t>(v) << 16) | l;
}
constexpr std::uint64_t edge_key(const Edge& e) noexcept { return edge_key(e.src, e.dst, e.layer); }
constexpr Edge edge_from_key(std::uint64_t k) noexcept {
    return Edge{static_cast<NodeId>(k >> 40), static_cast<NodeId>((k >> 16) & 0xFFFFFFu),
                static_cast<LayerId>(k & 0xFFFFu)};
}

/// Orders the endpoints so that src < dst; used for undirected keys.
constexpr Edge canonical_undirected(Edge e) noexcept {
    if (e.src > e.dst) std::swap(e.src, e.dst);
    return e;
}

/// Sorted string interner. Ids follow the lexical order of the names, so building
/// from any permutation of the same input yields the same ids.
class Dictionary {
public:
    Dictionary() = default;
    explicit Dictionary(std::vector<std::string> names);

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(std::size_t id) const { return names_.at(id); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    /// Returns size() when the name is unknown.
    std::size_t find(std::string_view name) const;
    bool contains(std::string_view name) const { return find(name) != size(); }

    friend bool operator==(const Dictionary& a, const Dictionary& b) { return a.names_ == b.names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Directed multiplex network G = (V, L, E, A).
///
/// Node, layer and attribute names are interned in dictionaries that may be shared by
/// several graphs (a training graph and the full graph it was cut from, for instance).
/// The node dictionary is a universe: only nodes flagged present belong to V.
/// Undirected graphs store both orientations of every edge.
/// Immutable once constructed.
class MultiplexGraph {
public:
    MultiplexGraph() = default;

    /// Builds a graph over the given dictionaries. Self-loops are dropped, duplicate
    /// triples merged; in undirected mode the reverse orientation is added. Every
    /// endpoint becomes present, plus any node listed in extra_nodes.
    MultiplexGraph(bool directed, Dictionary nodes, Dictionary layers, Dictionary attrs,
                   std::vector<AttrId> node_attr, std::span<const Edge> edges,
                   std::span<const NodeId> extra_nodes = {});

    /// Same dictionaries and attributes as `like`, different edge set.
    static MultiplexGraph with_edges(const MultiplexGraph& like, std::span<const Edge> edges,
                                     std::span<const NodeId> extra_nodes = {});

    bool directed() const noexcept { return directed_; }

    const Dictionary& node_names() const noexcept { return node_names_; }
    const Dictionary& layer_names() const noexcept { return layer_names_; }
    const Dictionary& attr_names() const noexcept { return attr_names_; }

    std::size_t universe_size() const noexcept { return node_names_.size(); }
    std::size_t layer_count() const noexcept { return layer_names_.size(); }

    /// Present nodes, ascending.
    std::span<const NodeId> nodes() const noexcept { return nodes_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    bool has_node(NodeId u) const noexcept { return u < present_.size() && present_[u]; }
    AttrId attr(NodeId u) const { return node_attr_.at(u); }
    const std::vector<AttrId>& node_attrs() const noexcept { return node_attr_; }

    /// Stored directed triples, sorted. Undirected graphs hold both orientations.
    std::span<const Edge> stored_edges() const noexcept { return edges_; }
    /// Logical edges: stored edges for directed graphs, src < dst representatives otherwise.
    std::vector<Edge> logical_edges() const;
    /// Number of logical edges.
    std::size_t edge_count() const noexcept { return directed_ ? edges_.size() : edges_.size() / 2; }

    bool has_edge(NodeId u, NodeId v, LayerId l) const {
        return edge_set_.contains(edge_key(u, v, l));
    }
    bool has_edge(const Edge& e) const { return has_edge(e.src, e.dst, e.layer); }

    std::span<const NodeId> out_neighbors(NodeId u, LayerId l) const { return out_[slot(u, l)]; }
    std::span<const NodeId> in_neighbors(NodeId u, LayerId l) const { return in_[slot(u, l)]; }

    /// Logical edge count of one layer.
    std::size_t layer_edge_count(LayerId l) const { return layer_edges_.at(l); }
    /// Nodes with at least one edge in layer l.
    std::size_t layer_node_count(LayerId l) const { return layer_nodes_.at(l); }

    /// Exact structural equality, compared through names so that graphs with different
    /// dictionaries can be compared.
    friend bool same_graph(const MultiplexGraph& a, const MultiplexGraph& b);

private:
    std::size_t slot(NodeId u, LayerId l) const { return static_cast<std::size_t>(u) * layer_count() + l; }

    bool directed_ = true;
    Dictionary node_names_;
    Dictionary layer_names_;
    Dictionary attr_names_;
    std::vector<AttrId> node_attr_;
    std::vector<NodeId> nodes_;
    std::vector<char> present_;
    std::vector<Edge> edges_;
    std::unordered_set<std::uint64_t> edge_set_;
    std::vector<std::vector<NodeId>> out_;
    std::vector<std::vector<NodeId>> in_;
    std::vector<std::size_t> layer_edges_;
    std::vector<std::size_t> layer_nodes_;
};

/// Single-layer view: an edge between two nodes iff they share a link in any layer.
struct SimpleGraph {
    bool directed = false;
    Dictionary node_names;
    std::vector<NodeId> nodes;
    /// Sorted; for undirected graphs src < dst.
    std::vector<std::pair<NodeId, NodeId>> edges;

    /// Re-expresses the simple graph as a one-layer multiplex graph, so the evaluation
    /// machinery can split it. All nodes get the default attribute.
    MultiplexGraph as_multiplex(std::string layer_name = "all") const;
};

/// Union of all layers. Undirected output unless keep_direction is set and g is directed.
SimpleGraph collapse(const MultiplexGraph& g, bool keep_direction = false);

} // namespace muxrule
