#include "muxrule/pipeline.hpp"

#include <array>

#include "muxrule/baselines.hpp"
#include "muxrule/error.hpp"
#include "muxrule/miner.hpp"
#include "muxrule/rules.hpp"

namespace muxrule {

namespace {

constexpr std::array<std::pair<PredictorKind, std::string_view>, 8> kNames{{
    {PredictorKind::magma, "magma"},
    {PredictorKind::sharma, "sharma"},
    {PredictorKind::cn, "cn"},
    {PredictorKind::aa, "aa"},
    {PredictorKind::ra, "ra"},
    {PredictorKind::pa, "pa"},
    {PredictorKind::ja, "ja"},
    {PredictorKind::ensemble, "ensemble"},
}};

Classical classical_of(PredictorKind k) {
    switch (k) {
    case PredictorKind::cn: return Classical::cn;
    case PredictorKind::aa: return Classical::aa;
    case PredictorKind::ra: return Classical::ra;
    case PredictorKind::pa: return Classical::pa;
    case PredictorKind::ja: return Classical::ja;
    default: throw UsageError("not a classical predictor");
    }
}

// Repeats layer-less (u, v, 0) scores on every layer of g.
ScoreTable broadcast(const ScoreTable& t, const MultiplexGraph& g) {
    if (g.layer_count() == 1) return t;
    std::vector<ScoredLink> entries;
    entries.reserve(t.size() * g.layer_count());
    for (const auto& e : t.entries())
        for (LayerId l = 0; l < g.layer_count(); ++l) entries.push_back({Edge{e.link.src, e.link.dst, l}, e.score, {}});
    return ScoreTable(t.tag(), std::move(entries));
}

} // namespace

std::string_view to_string(PredictorKind k) {
    for (const auto& [kind, name] : kNames)
        if (kind == k) return name;
    return "magma";
}

PredictorKind parse_predictor(std::string_view s) {
    for (const auto& [kind, name] : kNames)
        if (name == s) return kind;
    throw UsageError("unknown predictor '" + std::string(s) + "'");
}

bool is_classical(PredictorKind k) {
    return k == PredictorKind::cn || k == PredictorKind::aa || k == PredictorKind::ra || k == PredictorKind::pa ||
           k == PredictorKind::ja;
}

ScoreTable score_split(const EvalSplit& split, PredictorKind kind, const PipelineConfig& cfg, FoldStats* stats) {
    const auto& g = split.train;
    switch (kind) {
    case PredictorKind::magma: {
        MinerConfig mc;
        mc.min_support = cfg.min_support.value_or(default_min_support(g));
        mc.max_nodes = cfg.max_nodes;
        mc.state_budget = cfg.state_budget;
        mc.workers = cfg.workers;
        const auto mined = mine(g, mc);
        const auto rules = build_rules(mined.patterns, g);
        PredictOptions po;
        po.weighting = cfg.weighting;
        po.per_embedding = cfg.per_embedding;
        po.workers = cfg.workers;
        if (stats) *stats = {rules.size(), mined.patterns.size(), mc.min_support};
        return score_links(g, rules, po);
    }
    case PredictorKind::sharma: return sharma_scores(g);
    case PredictorKind::ensemble: throw UsageError("score_split takes a single predictor");
    default: return broadcast(classical_scores(collapse(g), classical_of(kind)), g);
    }
}

FoldOutcome evaluate_split(EvalSplit& split, const PipelineConfig& cfg, std::vector<std::string>* warnings) {
    if (split.negatives.empty()) split.negatives = candidates(split, cfg.negatives, warnings);
    FoldOutcome out;
    ScoreTable table;
    if (cfg.predictor == PredictorKind::ensemble) {
        auto members = cfg.members;
        if (members.empty())
            members = {PredictorKind::magma, PredictorKind::sharma, PredictorKind::cn, PredictorKind::aa,
                       PredictorKind::ra,    PredictorKind::pa,     PredictorKind::ja};
        std::vector<ScoreTable> tables;
        for (auto k : members) tables.push_back(score_split(split, k, cfg));
        std::vector<Edge> pool = split.test_positives;
        pool.insert(pool.end(), split.negatives.begin(), split.negatives.end());
        std::sort(pool.begin(), pool.end());
        table = ensemble(tables, pool, split.test_positives, cfg.ensemble_mode, cfg.seed + split.fold).scores;
    } else {
        FoldStats st;
        table = score_split(split, cfg.predictor, cfg, &st);
        out.rule_count = st.rule_count;
        out.pattern_count = st.pattern_count;
        out.min_support = st.min_support;
    }
    out.table_size = table.size();
    for (const Edge& e : split.test_positives) out.positive_scores.push_back(table.score(e));
    for (const Edge& e : split.negatives) out.negative_scores.push_back(table.score(e));
    out.report = roc_from_scores(out.positive_scores, out.negative_scores);
    out.report.predictor = table.tag();
    out.report.fold = split.fold;
    return out;
}

PipelineResult cross_validate(const MultiplexGraph& g, const PipelineConfig& cfg) {
    const bool flatten = cfg.collapse || is_classical(cfg.predictor);
    const MultiplexGraph host = flatten ? collapse(g).as_multiplex() : g;
    auto splits = split_random(host, cfg.folds, cfg.seed);
    PipelineResult res;
    std::vector<EvalReport> reports;
    std::vector<std::vector<double>> pos, neg;
    for (auto& s : splits) {
        NegativeMode mode = cfg.negatives;
        mode.seed += s.fold;
        PipelineConfig fold_cfg = cfg;
        fold_cfg.negatives = mode;
        auto f = evaluate_split(s, fold_cfg, &res.warnings);
        reports.push_back(f.report);
        pos.push_back(f.positive_scores);
        neg.push_back(f.negative_scores);
        res.folds.push_back(std::move(f));
    }
    res.summary = summarize(std::move(reports), pos, neg);
    return res;
}

} // namespace muxrule
