#include "muxrule/transform.hpp"

#include <map>
#include <numeric>

#include "muxrule/error.hpp"

namespace muxrule {

std::string replica_name(std::string_view node, std::string_view layer) {
    std::string out(node);
    out += '@';
    out += layer;
    return out;
}

CoupledMultigraph to_coupled(const MultiplexGraph& g) {
    const auto& nn = g.node_names();
    const auto& ln = g.layer_names();

    // (node, layer) occurrences
    std::map<std::pair<NodeId, LayerId>, std::string> occ;
    for (const Edge& e : g.stored_edges()) {
        occ.try_emplace({e.src, e.layer}, replica_name(nn.name(e.src), ln.name(e.layer)));
        occ.try_emplace({e.dst, e.layer}, replica_name(nn.name(e.dst), ln.name(e.layer)));
    }
    std::vector<std::string> names;
    names.reserve(occ.size());
    for (const auto& [key, name] : occ) names.push_back(name);
    Dictionary replica_dict(names);
    if (replica_dict.size() != occ.size()) throw StructuralError("replica names collide; node names contain '@'");

    Dictionary attr_dict(ln.names());
    Dictionary type_dict({std::string(CoupledMultigraph::kCouplingLayer), std::string(CoupledMultigraph::kIntraLayer)});
    const auto coupling = static_cast<LayerId>(type_dict.find(CoupledMultigraph::kCouplingLayer));
    const auto intra = static_cast<LayerId>(type_dict.find(CoupledMultigraph::kIntraLayer));

    CoupledMultigraph cg;
    cg.replicas.resize(replica_dict.size());
    std::vector<AttrId> replica_attr(replica_dict.size());
    std::map<std::pair<NodeId, LayerId>, NodeId> rid;
    std::map<NodeId, std::vector<NodeId>> by_node;
    for (const auto& [key, name] : occ) {
        const auto r = static_cast<NodeId>(replica_dict.find(name));
        rid[key] = r;
        by_node[key.first].push_back(r);
        replica_attr[r] = static_cast<AttrId>(attr_dict.find(ln.name(key.second)));
        cg.replicas[r] = {nn.name(key.first), g.attr_names().name(g.attr(key.first))};
    }

    std::vector<Edge> edges;
    for (const Edge& e : g.stored_edges()) edges.push_back(Edge{rid[{e.src, e.layer}], rid[{e.dst, e.layer}], intra});
    for (const auto& [u, reps] : by_node)
        for (std::size_t i = 0; i < reps.size(); ++i)
            for (std::size_t j = 0; j < reps.size(); ++j)
                if (i != j) edges.push_back(Edge{reps[i], reps[j], coupling});

    for (NodeId u : g.nodes())
        if (!by_node.contains(u)) cg.isolated.push_back({nn.name(u), g.attr_names().name(g.attr(u))});

    // Both orientations of coupling edges are already emitted, so a directed container
    // keeps type-2 direction intact; undirected inputs stay undirected.
    cg.graph = MultiplexGraph(g.directed(), std::move(replica_dict), std::move(type_dict), std::move(attr_dict),
                              std::move(replica_attr), edges);
    return cg;
}

MultiplexGraph from_coupled(const CoupledMultigraph& cg) {
    const MultiplexGraph& h = cg.graph;
    if (cg.replicas.size() != h.universe_size()) throw StructuralError("replica table does not match graph");
    const std::size_t coupling_id = h.layer_names().find(CoupledMultigraph::kCouplingLayer);
    const std::size_t intra_id = h.layer_names().find(CoupledMultigraph::kIntraLayer);

    std::vector<NodeId> parent(h.universe_size());
    std::iota(parent.begin(), parent.end(), NodeId{0});
    auto find = [&](NodeId x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    for (const Edge& e : h.stored_edges()) {
        if (e.layer == coupling_id) {
            if (h.attr(e.src) == h.attr(e.dst))
                throw StructuralError("coupling edge joins two replicas of the same layer");
            parent[find(e.src)] = find(e.dst);
        } else if (e.layer == intra_id) {
            if (h.attr(e.src) != h.attr(e.dst))
                throw StructuralError("intra-layer edge joins replicas of different layers; layer is ambiguous");
        } else {
            throw StructuralError("unknown edge type in coupled multigraph");
        }
    }

    // One physical node per coupling component, named after its replicas.
    std::map<NodeId, std::string> component_name;
    for (NodeId r : h.nodes()) {
        auto [it, inserted] = component_name.try_emplace(find(r), cg.replicas[r].node);
        if (!inserted && it->second != cg.replicas[r].node)
            throw StructuralError("coupled replicas of '" + it->second + "' and '" + cg.replicas[r].node +
                                  "' disagree on the physical node");
    }

    std::vector<std::string> node_list;
    std::vector<std::string> attr_list{std::string(kDefaultAttribute)};
    std::map<std::string, std::string> node_attr;
    for (NodeId r : h.nodes()) {
        node_list.push_back(cg.replicas[r].node);
        node_attr[cg.replicas[r].node] = cg.replicas[r].node_attr;
    }
    for (const auto& iso : cg.isolated) {
        node_list.push_back(iso.node);
        node_attr[iso.node] = iso.node_attr;
    }
    for (const auto& [n, a] : node_attr) attr_list.push_back(a);

    Dictionary nodes(std::move(node_list));
    Dictionary layers(h.attr_names().names());
    Dictionary attrs(std::move(attr_list));
    std::vector<AttrId> attr_of(nodes.size());
    for (const auto& [n, a] : node_attr) attr_of[nodes.find(n)] = static_cast<AttrId>(attrs.find(a));

    std::vector<Edge> edges;
    for (const Edge& e : h.stored_edges()) {
        if (e.layer != intra_id) continue;
        const auto u = static_cast<NodeId>(nodes.find(component_name.at(find(e.src))));
        const auto v = static_cast<NodeId>(nodes.find(component_name.at(find(e.dst))));
        const auto l = static_cast<LayerId>(layers.find(h.attr_names().name(h.attr(e.src))));
        edges.push_back(Edge{u, v, l});
    }
    std::vector<NodeId> extra;
    for (const auto& iso : cg.isolated) extra.push_back(static_cast<NodeId>(nodes.find(iso.node)));
    return MultiplexGraph(h.directed(), std::move(nodes), std::move(layers), std::move(attrs), std::move(attr_of),
                          edges, extra);
}

} // namespace muxrule
