#include "muxrule/rules.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace muxrule {

double layer_density(const MultiplexGraph& g, LayerId layer) {
    const double n = static_cast<double>(g.node_count());
    if (n < 2) return 0.0;
    double pairs = n * (n - 1);
    if (!g.directed()) pairs /= 2;
    return static_cast<double>(g.layer_edge_count(layer)) / pairs;
}

double rule_lift(const Rule& r, const MultiplexGraph& g) {
    const double d = r.delta_edge.layer < g.layer_count() ? layer_density(g, r.delta_edge.layer) : 0.0;
    if (d <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return r.confidence / d;
}

namespace {

// Slot of the consequent left isolated once edge `e` is removed, if any.
std::optional<Slot> orphan_after_removal(const Pattern& p, std::size_t index) {
    const auto& e = p.edges()[index];
    for (Slot s : {e.src, e.dst}) {
        bool touched = false;
        for (std::size_t i = 0; i < p.edge_count() && !touched; ++i)
            if (i != index && (p.edges()[i].src == s || p.edges()[i].dst == s)) touched = true;
        if (!touched) return s;
    }
    return std::nullopt;
}

} // namespace

std::vector<Rule> build_rules(const std::vector<Pattern>& patterns, const MultiplexGraph& g) {
    std::map<CanonicalCode, const Pattern*> by_code;
    for (const auto& p : patterns) by_code.emplace(p.code(), &p);

    std::vector<Rule> rules;
    for (const auto& [code, p2ptr] : by_code) {
        const Pattern& p2 = *p2ptr;
        if (p2.edge_count() < 2) continue;
        const auto autos = automorphisms(p2);

        // Edge orbits under Aut(p2): keep the smallest edge index of each orbit.
        std::set<std::size_t> reps;
        std::vector<char> seen(p2.edge_count(), 0);
        for (std::size_t i = 0; i < p2.edge_count(); ++i) {
            if (seen[i]) continue;
            reps.insert(i);
            const auto& e = p2.edges()[i];
            for (const auto& perm : autos) {
                PatternEdge img{perm[e.src], perm[e.dst], e.layer};
                if (!p2.directed() && img.src > img.dst) std::swap(img.src, img.dst);
                auto it = std::lower_bound(p2.edges().begin(), p2.edges().end(), img);
                seen[static_cast<std::size_t>(it - p2.edges().begin())] = 1;
            }
        }

        for (std::size_t i : reps) {
            const auto orphan = orphan_after_removal(p2, i);
            // Reorder consequent slots so the orphan (if any) is last.
            std::vector<Slot> perm(p2.node_count());
            Slot next = 0;
            for (std::size_t s = 0; s < p2.node_count(); ++s)
                if (!orphan || s != *orphan) perm[s] = next++;
            if (orphan) perm[*orphan] = next;
            Pattern consequent = p2.relabeled(perm);
            const auto& e = p2.edges()[i];
            PatternEdge delta{perm[e.src], perm[e.dst], e.layer};
            if (!consequent.directed() && delta.src > delta.dst) std::swap(delta.src, delta.dst);
            const auto delta_index = static_cast<std::size_t>(
                std::lower_bound(consequent.edges().begin(), consequent.edges().end(), delta) -
                consequent.edges().begin());

            Pattern antecedent = consequent.without_edge(delta_index);
            if (antecedent.edge_count() == 0 || !antecedent.connected()) continue;
            auto it = by_code.find(antecedent.code());
            if (it == by_code.end()) continue;
            antecedent.support = it->second->support;

            Rule r;
            r.antecedent = std::move(antecedent);
            r.consequent = std::move(consequent);
            r.delta_edge = delta;
            r.new_node = orphan.has_value();
            r.confidence = static_cast<double>(p2.support) / static_cast<double>(r.antecedent.support);
            r.lift = rule_lift(r, g);
            rules.push_back(std::move(r));
        }
    }
    std::stable_sort(rules.begin(), rules.end(), [](const Rule& a, const Rule& b) {
        if (a.consequent.code() != b.consequent.code()) return a.consequent.code() < b.consequent.code();
        if (a.antecedent.code() != b.antecedent.code()) return a.antecedent.code() < b.antecedent.code();
        return a.delta_edge < b.delta_edge;
    });
    for (std::size_t i = 0; i < rules.size(); ++i) rules[i].id = i;
    return rules;
}

bool passes(const Rule& r, const RuleFilter& f) {
    if (r.confidence < f.min_confidence) return false;
    if (f.min_lift && !(r.lift > *f.min_lift)) return false;
    if (f.layer) {
        bool hit = false;
        for (const auto& e : r.consequent.edges()) hit = hit || e.layer == *f.layer;
        if (!hit) return false;
    }
    return true;
}

} // namespace muxrule
