#pragma once

#include <cstdint>
#include <vector>

#include "muxrule/graph.hpp"
#include "muxrule/matcher.hpp"
#include "muxrule/pattern.hpp"

namespace muxrule {

struct MinerConfig {
    /// Minimum-image support threshold (sigma).
    std::uint64_t min_support = 1;
    /// Largest pattern, in nodes (s).
    std::size_t max_nodes = 4;
    /// Partial-state cap per support count; 0 disables it.
    std::uint64_t state_budget = kDefaultStateBudget;
    unsigned workers = 1;
};

/// Throws UsageError unless min_support >= 1 and 2 <= max_nodes <= kMaxPatternNodes.
void validate(const MinerConfig& cfg);

struct MineStats {
    std::size_t candidates = 0;          // distinct children generated
    std::size_t pruned_by_subpattern = 0; // children with an infrequent one-edge-smaller subpattern
    std::size_t counted = 0;             // children whose support was counted
    std::size_t parent_child_pairs = 0;
    std::size_t anti_monotone_violations = 0;
    std::uint64_t states = 0;
    std::vector<std::size_t> frequent_per_level; // index = edge count - 1
};

struct MineResult {
    /// Canonical-form patterns sorted by code, supports filled.
    std::vector<Pattern> patterns;
    MineStats stats;
};

/// Level-wise growth one edge at a time from the frequent single edges. Children are
/// deduplicated by canonical code, pruned when any connected one-edge-smaller
/// subpattern is infrequent, then counted against the threshold.
MineResult mine(const MultiplexGraph& g, const MinerConfig& cfg);

/// Node count of the smallest non-empty layer: the largest threshold that still lets
/// every layer appear in some pattern.
std::uint64_t default_min_support(const MultiplexGraph& g);

} // namespace muxrule
