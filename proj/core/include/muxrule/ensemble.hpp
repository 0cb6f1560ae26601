#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "muxrule/graph.hpp"
#include "muxrule/score_table.hpp"

namespace muxrule {

enum class EnsembleMode { base, over };

EnsembleMode parse_ensemble_mode(std::string_view s);

struct AnnealSchedule {
    double t_start = 1.0;
    double t_end = 1e-3;
    double cooling = 0.95;
    double step = 0.1;
    std::size_t moves_per_temperature = 20;
};

struct EnsembleResult {
    ScoreTable scores;
    std::vector<double> weights;
    /// AUC of the returned weights on the supplied truth; NaN in base mode without truth.
    double auc = 0.0;
};

/// z-score of every table over `candidates` (absent links imputed 0 first; a
/// constant column becomes all zeros). Row i is candidate i, column j is table j.
std::vector<std::vector<double>> z_matrix(std::span<const ScoreTable> tables, std::span<const Edge> candidates);

/// Combines the tables over `candidates`. base: equal-weight sum of z-scores.
/// over: simulated annealing over weights, maximizing AUC with `positives` (a subset
/// of candidates) as the truth. The table holds every candidate.
EnsembleResult ensemble(std::span<const ScoreTable> tables, std::span<const Edge> candidates,
                        std::span<const Edge> positives, EnsembleMode mode, std::uint64_t seed,
                        const AnnealSchedule& schedule = {});

} // namespace muxrule
