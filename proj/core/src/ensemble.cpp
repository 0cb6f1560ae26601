#include "muxrule/ensemble.hpp"

#include <cmath>
#include <random>
#include <unordered_set>

#include "muxrule/error.hpp"
#include "muxrule/eval.hpp"

namespace muxrule {

EnsembleMode parse_ensemble_mode(std::string_view s) {
    if (s == "base") return EnsembleMode::base;
    if (s == "over") return EnsembleMode::over;
    throw UsageError("ensemble mode must be base or over, got '" + std::string(s) + "'");
}

std::vector<std::vector<double>> z_matrix(std::span<const ScoreTable> tables, std::span<const Edge> candidates) {
    const std::size_t n = candidates.size(), k = tables.size();
    std::vector<std::vector<double>> z(n, std::vector<double>(k, 0.0));
    for (std::size_t j = 0; j < k; ++j) {
        double sum = 0, sq = 0;
        for (std::size_t i = 0; i < n; ++i) {
            z[i][j] = tables[j].score(candidates[i]);
            sum += z[i][j];
        }
        const double mean = n ? sum / static_cast<double>(n) : 0.0;
        for (std::size_t i = 0; i < n; ++i) sq += (z[i][j] - mean) * (z[i][j] - mean);
        const double sd = n ? std::sqrt(sq / static_cast<double>(n)) : 0.0;
        for (std::size_t i = 0; i < n; ++i) z[i][j] = sd > 0 ? (z[i][j] - mean) / sd : 0.0;
    }
    return z;
}

namespace {

std::vector<double> combine(const std::vector<std::vector<double>>& z, const std::vector<double>& w) {
    std::vector<double> out(z.size(), 0.0);
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = 0; j < w.size(); ++j) out[i] += w[j] * z[i][j];
    return out;
}

double auc_of(const std::vector<double>& s, const std::vector<char>& truth) {
    std::vector<double> pos, neg;
    for (std::size_t i = 0; i < s.size(); ++i) (truth[i] ? pos : neg).push_back(s[i]);
    return auc_from_scores(pos, neg);
}

} // namespace

EnsembleResult ensemble(std::span<const ScoreTable> tables, std::span<const Edge> candidates,
                        std::span<const Edge> positives, EnsembleMode mode, std::uint64_t seed,
                        const AnnealSchedule& schedule) {
    if (tables.size() < 2) throw UsageError("an ensemble needs at least two score tables");
    const std::size_t k = tables.size();
    const auto z = z_matrix(tables, candidates);

    std::unordered_set<std::uint64_t> pos_keys;
    for (const Edge& e : positives) pos_keys.insert(edge_key(e));
    std::vector<char> truth(candidates.size(), 0);
    bool any_pos = false, any_neg = false;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        truth[i] = pos_keys.contains(edge_key(candidates[i]));
        (truth[i] ? any_pos : any_neg) = true;
    }
    const bool labelled = any_pos && any_neg;
    if (mode == EnsembleMode::over && !labelled)
        throw EvaluationError("over mode needs both positive and negative candidates");

    std::vector<double> w(k, 1.0);
    auto scores = combine(z, w);
    double auc = labelled ? auc_of(scores, truth) : std::nan("");

    if (mode == EnsembleMode::over) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> step(0.0, schedule.step);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::vector<double> best_w = w;
        double best = auc;
        // Single-method weightings join the best-seen set so the result never trails
        // the strongest individual input.
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<double> one(k, 0.0);
            one[j] = 1.0;
            const double a = auc_of(combine(z, one), truth);
            if (a > best) {
                best = a;
                best_w = one;
            }
        }
        double current = auc;
        for (double t = schedule.t_start; t >= schedule.t_end; t *= schedule.cooling) {
            for (std::size_t m = 0; m < schedule.moves_per_temperature; ++m) {
                auto proposal = w;
                proposal[static_cast<std::size_t>(rng() % k)] += step(rng);
                const double a = auc_of(combine(z, proposal), truth);
                if (a >= current || unit(rng) < std::exp((a - current) / t)) {
                    w = std::move(proposal);
                    current = a;
                    if (a > best) {
                        best = a;
                        best_w = w;
                    }
                }
            }
        }
        w = best_w;
        auc = best;
        scores = combine(z, w);
    }

    std::vector<ScoredLink> entries;
    entries.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) entries.push_back({candidates[i], scores[i], {}});
    EnsembleResult res;
    res.scores = ScoreTable(mode == EnsembleMode::over ? "ensemble-over" : "ensemble-base", std::move(entries));
    res.weights = std::move(w);
    res.auc = auc;
    return res;
}

} // namespace muxrule
