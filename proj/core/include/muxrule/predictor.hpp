#pragma once

#include <string_view>
#include <vector>

#include "muxrule/graph.hpp"
#include "muxrule/rules.hpp"
#include "muxrule/score_table.hpp"

namespace muxrule {

/// How the rules that fire on a link are aggregated into its score.
enum class Weighting { count, conf, lift, conf_mean, lift_mean };

std::string_view to_string(Weighting w);
/// Accepts count, conf, lift, conf-mean, lift-mean. Throws UsageError otherwise.
Weighting parse_weighting(std::string_view s);

struct PredictOptions {
    Weighting weighting = Weighting::conf;
    /// Count every antecedent embedding instead of once per rule and link.
    bool per_embedding = false;
    bool provenance = false;
    unsigned workers = 1;
};

/// Scores unobserved typed links: every embedding of a same-node rule's antecedent
/// maps the delta edge to a concrete link; existing training edges are skipped.
/// Undirected graphs yield src < dst keys.
ScoreTable score_links(const MultiplexGraph& g, const std::vector<Rule>& rules, const PredictOptions& opt = {});

/// Old-new scores from new-node rules, keyed by (anchored node, layer, direction).
OldNewScoreTable score_old_new(const MultiplexGraph& g, const std::vector<Rule>& rules,
                               const PredictOptions& opt = {});

} // namespace muxrule
