#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "muxrule/graph.hpp"

namespace muxrule {

using Slot = std::uint8_t;

/// Largest pattern the miner and the canonicalizer accept.
inline constexpr std::size_t kMaxPatternNodes = 8;

struct PatternEdge {
    Slot src = 0;
    Slot dst = 0;
    LayerId layer = 0;

    friend auto operator<=>(const PatternEdge&, const PatternEdge&) = default;
};

/// Canonical form: equal iff the patterns are isomorphic. Also a total order key.
using CanonicalCode = std::vector<std::uint32_t>;

/// Small connected multiplex subgraph.
///
/// In undirected patterns every edge is stored once with src < dst and stands for both
/// orientations. Directed patterns store each arc as-is.
class Pattern {
public:
    Pattern() = default;
    Pattern(bool directed, std::vector<AttrId> attrs, std::vector<PatternEdge> edges);

    bool directed() const noexcept { return directed_; }
    std::size_t node_count() const noexcept { return attrs_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<AttrId>& attrs() const noexcept { return attrs_; }
    AttrId attr(Slot s) const { return attrs_.at(s); }
    /// Sorted, unique; src < dst when undirected.
    const std::vector<PatternEdge>& edges() const noexcept { return edges_; }
    bool has_edge(Slot a, Slot b, LayerId l) const;

    /// Ignoring direction and layer.
    bool connected() const;

    /// Pattern plus one edge (normalized for undirected patterns). Slot `node_count()`
    /// may be used to attach a new node carrying `new_attr`.
    Pattern with_edge(PatternEdge e, AttrId new_attr = 0) const;
    /// Pattern minus edge `index`; a slot left without edges is removed and the
    /// remaining slots keep their relative order.
    Pattern without_edge(std::size_t index) const;
    /// Applies a slot relabeling: new slot of old slot s is perm[s].
    Pattern relabeled(const std::vector<Slot>& perm) const;

    const CanonicalCode& code() const;

    std::uint64_t support = 0;

    friend bool operator==(const Pattern& a, const Pattern& b) {
        return a.directed_ == b.directed_ && a.attrs_ == b.attrs_ && a.edges_ == b.edges_;
    }

private:
    void normalize();

    bool directed_ = true;
    std::vector<AttrId> attrs_;
    std::vector<PatternEdge> edges_;
    mutable CanonicalCode code_;
};

/// Checks the Pattern invariants (connected, 2..kMaxPatternNodes slots, >= 1 edge,
/// no self-loops, slot ids in range). Throws UsageError with the reason.
void validate(const Pattern& p);

/// Minimum serialization over slot orderings consistent with an isomorphism-invariant
/// slot partition. Also reports the canonical slot order: slot s goes to position order[s].
CanonicalCode canonical_code(const Pattern& p, std::vector<Slot>* order = nullptr);

/// All slot permutations mapping the pattern onto itself (identity included).
std::vector<std::vector<Slot>> automorphisms(const Pattern& p);

/// Readable code string with names, e.g. `D|·,·|0>1:lunch`; equal for isomorphic patterns.
std::string code_string(const Pattern& p, const Dictionary& attrs, const Dictionary& layers);

/// The pattern in canonical slot order, so that isomorphic patterns compare equal.
Pattern canonical_form(const Pattern& p);

} // namespace muxrule
