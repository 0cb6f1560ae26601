#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "muxrule/ensemble.hpp"
#include "muxrule/eval.hpp"
#include "muxrule/matcher.hpp"
#include "muxrule/predictor.hpp"

namespace muxrule {

enum class PredictorKind { magma, sharma, cn, aa, ra, pa, ja, ensemble };

std::string_view to_string(PredictorKind k);
PredictorKind parse_predictor(std::string_view s);
bool is_classical(PredictorKind k);

struct PipelineConfig {
    PredictorKind predictor = PredictorKind::magma;
    Weighting weighting = Weighting::conf;
    bool per_embedding = false;
    /// Unset: smallest non-empty layer of each training graph.
    std::optional<std::uint64_t> min_support;
    std::size_t max_nodes = 4;
    std::uint64_t state_budget = kDefaultStateBudget;
    EnsembleMode ensemble_mode = EnsembleMode::base;
    /// Ensemble inputs; empty means magma, sharma and the five classical scores.
    std::vector<PredictorKind> members;
    std::size_t folds = 10;
    std::uint64_t seed = 7;
    NegativeMode negatives = NegativeMode::full();
    /// Evaluate on the single-layer union of all layers.
    bool collapse = false;
    unsigned workers = 1;
};

struct FoldOutcome {
    EvalReport report;
    std::vector<double> positive_scores;
    std::vector<double> negative_scores;
    std::size_t table_size = 0;
    std::size_t rule_count = 0;
    std::size_t pattern_count = 0;
    std::uint64_t min_support = 0;
};

struct PipelineResult {
    CrossValSummary summary;
    std::vector<FoldOutcome> folds;
    std::vector<std::string> warnings;
};

struct FoldStats {
    std::size_t rule_count = 0;
    std::size_t pattern_count = 0;
    std::uint64_t min_support = 0;
};

/// Scores one split with a single (non-ensemble) predictor. Classical scores are
/// computed on the collapsed training graph and repeated for every layer.
ScoreTable score_split(const EvalSplit& split, PredictorKind kind, const PipelineConfig& cfg,
                       FoldStats* stats = nullptr);

/// Splits g (collapsed first when cfg.collapse is set or the predictor is classical),
/// scores every fold and evaluates it against the fold's negatives.
PipelineResult cross_validate(const MultiplexGraph& g, const PipelineConfig& cfg);

/// Evaluates a prepared split (e.g. a temporal one) with the same machinery.
FoldOutcome evaluate_split(EvalSplit& split, const PipelineConfig& cfg, std::vector<std::string>* warnings = nullptr);

} // namespace muxrule
