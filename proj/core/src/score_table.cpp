#include "muxrule/score_table.hpp"

#include <algorithm>

#include "muxrule/error.hpp"

namespace muxrule {

ScoreTable::ScoreTable(std::string tag, std::vector<ScoredLink> entries)
    : tag_(std::move(tag)), entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(), [](const ScoredLink& a, const ScoredLink& b) { return a.link < b.link; });
    auto dup = std::adjacent_find(entries_.begin(), entries_.end(),
                                  [](const ScoredLink& a, const ScoredLink& b) { return a.link == b.link; });
    if (dup != entries_.end()) throw UsageError("score table has a duplicate link");
}

ScoreTable ScoreTable::from_keys(std::string tag, const std::unordered_map<std::uint64_t, double>& scores) {
    std::vector<ScoredLink> entries;
    entries.reserve(scores.size());
    for (const auto& [k, v] : scores) entries.push_back({edge_from_key(k), v, {}});
    return ScoreTable(std::move(tag), std::move(entries));
}

const ScoredLink* ScoreTable::find(const Edge& link) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), link,
                               [](const ScoredLink& a, const Edge& e) { return a.link < e; });
    return it != entries_.end() && it->link == link ? &*it : nullptr;
}

double ScoreTable::score(const Edge& link) const {
    const auto* hit = find(link);
    return hit ? hit->score : 0.0;
}

std::string_view to_string(Direction d) {
    switch (d) {
    case Direction::out: return "out";
    case Direction::in: return "in";
    case Direction::any: return "any";
    }
    return "any";
}

Direction parse_direction(std::string_view s) {
    if (s == "out") return Direction::out;
    if (s == "in") return Direction::in;
    if (s == "any") return Direction::any;
    throw UsageError("unknown direction '" + std::string(s) + "'");
}

OldNewScoreTable::OldNewScoreTable(std::string tag, std::vector<OldNewEntry> entries)
    : tag_(std::move(tag)), entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(), [](const OldNewEntry& a, const OldNewEntry& b) { return a.key < b.key; });
}

double OldNewScoreTable::score(const OldNewKey& key) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [](const OldNewEntry& a, const OldNewKey& k) { return a.key < k; });
    return it != entries_.end() && it->key == key ? it->score : 0.0;
}

} // namespace muxrule
