#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "muxrule/graph.hpp"
#include "muxrule/pattern.hpp"

namespace muxrule {

/// p1 -> p2 where p2 is p1 plus one edge.
///
/// Slots are shared: the consequent's first antecedent.node_count() slots are the
/// antecedent's slots, and when new_node is set the last consequent slot is the added
/// node. delta_edge is expressed in consequent slots.
struct Rule {
    std::size_t id = 0;
    Pattern antecedent;
    Pattern consequent;
    PatternEdge delta_edge;
    bool new_node = false;
    double confidence = 0.0;
    /// NaN when the delta layer is empty (lift undefined).
    double lift = std::numeric_limits<double>::quiet_NaN();
};

/// Every p1 -> p2 pair from the set where removing one edge of p2 (and a slot left
/// without edges) yields p1. Delta edges related by an automorphism of p2 are merged;
/// inequivalent ones give separate rules. Output order: consequent code, then
/// antecedent code, then delta edge; ids follow that order.
std::vector<Rule> build_rules(const std::vector<Pattern>& patterns, const MultiplexGraph& g);

/// Chance density of the delta layer among ordered node pairs (unordered for undirected graphs).
double layer_density(const MultiplexGraph& g, LayerId layer);

/// confidence / layer density; NaN for an empty layer.
double rule_lift(const Rule& r, const MultiplexGraph& g);

struct RuleFilter {
    double min_confidence = 0.0;
    /// Rules must satisfy lift > min_lift when set (NaN lifts never pass).
    std::optional<double> min_lift;
    /// Rules must mention this layer in antecedent or consequent.
    std::optional<LayerId> layer;
};

bool passes(const Rule& r, const RuleFilter& f);

} // namespace muxrule
