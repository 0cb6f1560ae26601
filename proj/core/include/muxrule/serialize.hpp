#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "muxrule/eval.hpp"
#include "muxrule/graph.hpp"
#include "muxrule/pattern.hpp"
#include "muxrule/rules.hpp"
#include "muxrule/score_table.hpp"

namespace muxrule {

// Text formats. Names are resolved through the graph's dictionaries; a name the graph
// does not know is a ParseError. `source` labels error messages.

/// JSON array of {nodes, edges: [[src, dst, layer]], support, code, directed}.
std::string patterns_to_json(const std::vector<Pattern>& patterns, const MultiplexGraph& g);
std::vector<Pattern> patterns_from_json(std::string_view text, const MultiplexGraph& g,
                                        std::string_view source = "<patterns>");

/// `t # i s support` / `v slot attr` / `e src dst layer` blocks.
std::string patterns_to_lg(const std::vector<Pattern>& patterns, const MultiplexGraph& g);

/// JSON array of {id, antecedent, consequent, delta_edge, new_node, confidence, lift}.
/// An undefined lift is written as null.
std::string rules_to_json(const std::vector<Rule>& rules, const MultiplexGraph& g);
std::vector<Rule> rules_from_json(std::string_view text, const MultiplexGraph& g,
                                  std::string_view source = "<rules>");

/// `src,dst,layer,score` with a header line. Layer-less tables (classical scores on
/// a collapsed graph) write their single layer name as given by `g`.
std::string scores_to_csv(const ScoreTable& t, const MultiplexGraph& g);
ScoreTable scores_from_csv(std::string_view text, const MultiplexGraph& g, std::string tag,
                           std::string_view source = "<scores>");

/// `node,layer,direction,score` with a header line.
std::string old_new_to_csv(const OldNewScoreTable& t, const MultiplexGraph& g);

/// `fpr,tpr,threshold` with a header line.
std::string roc_to_csv(const EvalReport& r);

/// {predictor, fold, auc, positives, negatives, old_new}.
std::string report_to_json(const EvalReport& r);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

} // namespace muxrule
