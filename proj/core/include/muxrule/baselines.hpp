#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "muxrule/graph.hpp"
#include "muxrule/score_table.hpp"

namespace muxrule {

/// p[given][target]: probability that a pair linked in `given` is also linked in `target`.
struct LayerCooccurrence {
    std::vector<std::vector<double>> p;

    double operator()(LayerId given, LayerId target) const { return p.at(given).at(target); }
};

/// Pair-overlap estimator |pairs in both| / |pairs in given|, 0 for an empty given layer.
/// Ordered pairs on directed graphs.
LayerCooccurrence layer_cooccurrence(const MultiplexGraph& g);

/// score(u, v, l1) = sum over l2 of p[l2][l1] * [u, v linked in l2], for every pair
/// linked in some layer and every layer l1 in which it is not yet linked.
ScoreTable sharma_scores(const MultiplexGraph& g);

enum class Classical { cn, aa, ra, pa, ja };

std::string_view to_string(Classical c);
Classical parse_classical(std::string_view s);

/// Neighbourhood scores over all non-adjacent pairs of an undirected simple graph
/// (directed input is symmetrized). Keys are (u, v, 0) with u < v; zero scores are
/// left out of the table. Throws UsageError on a graph without edges.
ScoreTable classical_scores(const SimpleGraph& sg, Classical method);

} // namespace muxrule
