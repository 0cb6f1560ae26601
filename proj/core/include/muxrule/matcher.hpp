#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "muxrule/error.hpp"
#include "muxrule/graph.hpp"
#include "muxrule/pattern.hpp"

namespace muxrule {

/// Default cap on partial states explored while counting one pattern's support.
inline constexpr std::uint64_t kDefaultStateBudget = 1'000'000;

/// Injective, attribute/direction/layer-preserving map from pattern slots to host nodes.
struct Embedding {
    std::vector<NodeId> nodes; // indexed by slot

    friend auto operator<=>(const Embedding&, const Embedding&) = default;
};

/// Backtracking subgraph matcher for one pattern against one host graph.
///
/// Slots are matched in a connectivity-first order; each new slot draws candidates
/// from the adjacency of an already-matched neighbour and is filtered by attribute,
/// per-layer degree, injectivity and all edges back to matched slots.
class Matcher {
public:
    /// budget = 0 disables the partial-state cap.
    Matcher(const Pattern& p, const MultiplexGraph& g, std::uint64_t budget = 0);

    /// Streams every embedding; visit returns false to stop early.
    /// Returns false when stopped by the visitor.
    bool for_each(const std::function<bool(std::span<const NodeId>)>& visit);

    /// Streams embeddings with `root` pinned to host node v.
    bool for_each_rooted(Slot root, NodeId v, const std::function<bool(std::span<const NodeId>)>& visit);

    /// First embedding with root -> v, written to out (size node_count()).
    bool find_rooted(Slot root, NodeId v, std::span<NodeId> out);

    /// Cheap necessary condition for v to play slot s.
    bool admissible(Slot s, NodeId v) const;

    std::uint64_t states() const noexcept { return states_; }
    const Pattern& pattern() const noexcept { return pattern_; }

private:
    struct Step {
        Slot slot = 0;
        // Anchor edge to an earlier slot used to generate candidates.
        Slot anchor = 0;
        LayerId layer = 0;
        bool from_out = true; // candidates = out-neighbours of the anchor image
        // Edges to earlier slots to verify: (other slot, layer, slot is source)
        std::vector<std::tuple<Slot, LayerId, bool>> checks;
    };

    const std::vector<Step>& plan_for(Slot root);
    bool extend(const std::vector<Step>& plan, std::size_t depth,
                const std::function<bool(std::span<const NodeId>)>& visit);
    void charge();

    const Pattern& pattern_;
    const MultiplexGraph& graph_;
    std::uint64_t budget_;
    std::uint64_t states_ = 0;
    // Required (out, in) degree per slot and layer.
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> need_;
    std::vector<std::vector<Step>> plans_;
    std::vector<NodeId> mapping_;
    std::vector<char> used_;
};

/// All embeddings, sorted by mapped node tuple.
std::vector<Embedding> embeddings(const Pattern& p, const MultiplexGraph& g);

struct SupportResult {
    /// Exact minimum-image support when `frequent`; otherwise an upper bound below the threshold.
    std::uint64_t support = 0;
    bool frequent = true;
    std::uint64_t states = 0;
};

/// Minimum over slots of the number of distinct host nodes the slot maps to.
///
/// With threshold > 0 the count stops as soon as some slot can no longer reach the
/// threshold. Throws ResourceError when the partial-state budget is exhausted.
SupportResult count_support(const Pattern& p, const MultiplexGraph& g, std::uint64_t threshold = 0,
                            std::uint64_t budget = 0);

/// Exact minimum-image support.
std::uint64_t min_image_support(const Pattern& p, const MultiplexGraph& g);

} // namespace muxrule
