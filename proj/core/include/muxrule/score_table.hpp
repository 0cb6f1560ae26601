#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "muxrule/graph.hpp"

namespace muxrule {

struct ScoredLink {
    Edge link;
    double score = 0.0;
    /// Contributing rule ids; empty unless provenance was requested.
    std::vector<std::size_t> rules;
};

/// Sparse score(u, v, l). Entries sorted by link; links absent from the table score 0.
class ScoreTable {
public:
    ScoreTable() = default;
    ScoreTable(std::string tag, std::vector<ScoredLink> entries);
    /// From packed edge keys.
    static ScoreTable from_keys(std::string tag, const std::unordered_map<std::uint64_t, double>& scores);

    const std::string& tag() const noexcept { return tag_; }
    std::span<const ScoredLink> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    double score(const Edge& link) const;
    const ScoredLink* find(const Edge& link) const;

private:
    std::string tag_;
    std::vector<ScoredLink> entries_;
};

enum class Direction : std::uint8_t { out, in, any };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view s);

struct OldNewKey {
    NodeId node = 0;
    LayerId layer = 0;
    Direction direction = Direction::out;

    friend auto operator<=>(const OldNewKey&, const OldNewKey&) = default;
};

struct OldNewEntry {
    OldNewKey key;
    double score = 0.0;
    std::vector<std::size_t> rules;
    /// Attributes the predicted new neighbour carries in contributing rules.
    std::vector<AttrId> new_node_attrs;
};

/// Likelihood that an old node gains a link of a given layer to a node not yet seen.
class OldNewScoreTable {
public:
    OldNewScoreTable() = default;
    OldNewScoreTable(std::string tag, std::vector<OldNewEntry> entries);

    const std::string& tag() const noexcept { return tag_; }
    std::span<const OldNewEntry> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    double score(const OldNewKey& key) const;

private:
    std::string tag_;
    std::vector<OldNewEntry> entries_;
};

} // namespace muxrule
