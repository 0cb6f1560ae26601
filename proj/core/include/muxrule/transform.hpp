#pragma once

#include <string>
#include <vector>

#include "muxrule/graph.hpp"

namespace muxrule {

/// Many-to-many multilayer encoding: one replica node per (node, layer) occurrence,
/// labeled by its layer. Edge type "1" couples replicas of the same physical node,
/// edge type "2" carries the original intra-layer links.
struct CoupledMultigraph {
    static constexpr std::string_view kCouplingLayer = "1";
    static constexpr std::string_view kIntraLayer = "2";

    struct Replica {
        std::string node;
        std::string node_attr;
    };

    MultiplexGraph graph;
    /// Indexed by replica node id in `graph`.
    std::vector<Replica> replicas;
    /// Physical nodes that have no edge in any layer (name, attribute).
    std::vector<Replica> isolated;
};

/// Replica name used in files: `<node>@<layer>`.
std::string replica_name(std::string_view node, std::string_view layer);

CoupledMultigraph to_coupled(const MultiplexGraph& g);

/// Inverse of to_coupled. Throws StructuralError when a type-2 edge joins replicas with
/// different layer labels or a type-1 edge joins replicas of the same layer.
MultiplexGraph from_coupled(const CoupledMultigraph& cg);

} // namespace muxrule
