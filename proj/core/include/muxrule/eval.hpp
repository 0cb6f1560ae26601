#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "muxrule/graph.hpp"
#include "muxrule/graph_io.hpp"
#include "muxrule/score_table.hpp"

namespace muxrule {

enum class LinkCategory : std::uint8_t { old_old, old_new, new_new };

std::string_view to_string(LinkCategory c);

/// A training graph, the links to recover, and the negatives to rank them against.
/// All links are logical (src < dst on undirected graphs) and share the training
/// graph's dictionaries.
struct EvalSplit {
    MultiplexGraph train;
    std::vector<Edge> test_positives;
    /// Parallel to test_positives.
    std::vector<LinkCategory> categories;
    std::vector<Edge> negatives;
    std::size_t fold = 0;
    std::uint64_t seed = 0;
};

/// Partitions the logical edges uniformly at random into `folds` near-equal parts;
/// split i trains on everything except part i. Training graphs keep only the nodes
/// their edges touch.
std::vector<EvalSplit> split_random(const MultiplexGraph& g, std::size_t folds, std::uint64_t seed);

/// Train/test pair with shared dictionaries (e.g. both returned by build_graphs).
/// Positives are the test links absent from training, categorized by endpoint age.
EvalSplit split_temporal(const MultiplexGraph& train, const MultiplexGraph& test);

EvalSplit load_temporal(const std::filesystem::path& train_path, const std::filesystem::path& test_path,
                        const std::optional<std::filesystem::path>& attr_path, const LoadOptions& options);

struct NegativeMode {
    /// 0 = every eligible link, otherwise a uniform sample of this size.
    std::size_t sample = 0;
    std::uint64_t seed = 0;

    static NegativeMode full() { return {}; }
    static NegativeMode sampled(std::size_t k, std::uint64_t seed) { return {k, seed}; }
};

/// Parses `full` or `sampled:K`.
NegativeMode parse_negative_mode(std::string_view s, std::uint64_t seed);

/// All (u, v, l) over training nodes with u != v that are neither training edges nor
/// positives; or a sample without replacement of that population. A sample larger
/// than the population is capped and a warning appended.
std::vector<Edge> candidates(const EvalSplit& split, const NegativeMode& mode,
                             std::vector<std::string>* warnings = nullptr);

/// Size of the full negative population, without materializing it.
std::size_t candidate_population(const EvalSplit& split);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    double threshold = std::numeric_limits<double>::infinity();
};

struct EvalReport {
    std::vector<RocPoint> roc;
    double auc = 0.0;
    std::size_t positives = 0;
    std::size_t negatives = 0;
    std::string predictor;
    bool old_new = false;
    std::size_t fold = 0;
};

/// ROC by sweeping distinct thresholds from high to low (ties form one step) and
/// trapezoidal AUC. Throws EvaluationError if either side is empty.
EvalReport roc_from_scores(std::span<const double> positive_scores, std::span<const double> negative_scores);

/// Same AUC as roc_from_scores without building the curve.
double auc_from_scores(std::span<const double> positive_scores, std::span<const double> negative_scores);

/// Scores split positives against split negatives; missing links score 0.
EvalReport roc_auc(const ScoreTable& scores, const EvalSplit& split);

/// Old-new evaluation: positives are (old node, layer, direction) keys that gained a
/// link to a new node in the test set; negatives are every other such key.
EvalReport evaluate_old_new(const OldNewScoreTable& scores, const EvalSplit& split);

/// Kendall tau-b between two score vectors over the same items.
double kendall_tau(std::span<const double> a, std::span<const double> b);

struct CrossValSummary {
    std::vector<EvalReport> folds;
    double mean_auc = 0.0;
    double pooled_auc = 0.0;
};

/// Mean of per-fold AUCs and the AUC of all folds' scores pooled together.
CrossValSummary summarize(std::vector<EvalReport> folds, std::span<const std::vector<double>> pos_scores,
                          std::span<const std::vector<double>> neg_scores);

} // namespace muxrule
