#include "cli.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "muxrule/baselines.hpp"
#include "muxrule/ensemble.hpp"
#include "muxrule/error.hpp"
#include "muxrule/eval.hpp"
#include "muxrule/graph_io.hpp"
#include "muxrule/miner.hpp"
#include "muxrule/pipeline.hpp"
#include "muxrule/predictor.hpp"
#include "muxrule/rules.hpp"
#include "muxrule/serialize.hpp"
#include "muxrule/synth.hpp"
#include "muxrule/transform.hpp"

#ifndef MUXRULE_VERSION
#define MUXRULE_VERSION "0.0.0"
#endif

namespace muxrule::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

class IoError : public Error {
public:
    using Error::Error;
};

constexpr std::string_view kEnvPrefix = "MRK_";

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + p.string());
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    out.flush();
    if (!out) throw IoError("short write to " + p.string());
}

fs::path staging_path(const fs::path& target) {
    return target.parent_path() / (target.filename().string() + ".tmp-" + std::to_string(::getpid()));
}

void atomic_write(const fs::path& target, const std::string& body) {
    const auto tmp = staging_path(target);
    try {
        write_file(tmp, body);
        fs::rename(tmp, target);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

using Files = std::vector<std::pair<std::string, std::string>>;

void atomic_write_dir(const fs::path& target, const Files& files) {
    const auto tmp = staging_path(target);
    std::error_code ec;
    fs::remove_all(tmp, ec);
    try {
        fs::create_directory(tmp);
        for (const auto& [name, body] : files) write_file(tmp / name, body);
        if (fs::exists(target)) fs::remove_all(target);
        fs::rename(tmp, target);
    } catch (...) {
        fs::remove_all(tmp, ec);
        throw;
    }
}

std::string env_name(std::string flag) {
    while (!flag.empty() && flag.front() == '-') flag.erase(flag.begin());
    std::string out(kEnvPrefix);
    for (char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

struct Context {
    std::string command;
    std::vector<std::string> argv;
    json env = json::object();
    json parameters = json::object();
    std::vector<fs::path> inputs;
    json timings = json::object();
    std::optional<std::uint64_t> seed;
    std::ostream* err = nullptr;
    bool quiet = false;

    void note(const std::string& msg) const {
        if (!quiet) *err << "muxrule: " << msg << '\n';
    }

    template <typename F>
    auto stage(const std::string& name, F&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        auto finish = [&] {
            const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            timings[name] = timings.contains(name) ? timings[name].get<double>() + s : s;
            if (!quiet) *err << "muxrule: " << name << " " << std::fixed << std::setprecision(3) << s << " s\n";
        };
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            finish();
        } else {
            auto r = fn();
            finish();
            return r;
        }
    }
};

struct Output {
    fs::path target;
    bool directory = false;
    Files files;
};

void commit(const Context& ctx, const Output& out) {
    if (out.directory) atomic_write_dir(out.target, out.files);
    else atomic_write(out.target, out.files.at(0).second);

    json m;
    m["tool"] = "muxrule";
    m["version"] = MUXRULE_VERSION;
    m["command"] = ctx.command;
    m["argv"] = ctx.argv;
    m["env"] = ctx.env;
    m["parameters"] = ctx.parameters;
    m["seed"] = ctx.seed ? json(*ctx.seed) : json(nullptr);
    json inputs = json::object();
    for (const auto& p : ctx.inputs) inputs[fs::absolute(p).lexically_normal().string()] = sha256_hex(read_file(p));
    m["inputs"] = inputs;
    m["target"] = out.target.string();
    m["directory"] = out.directory;
    json outputs = json::object();
    for (const auto& [name, body] : out.files) outputs[out.directory ? name : out.target.filename().string()] = sha256_hex(body);
    m["outputs"] = outputs;
    m["timings"] = ctx.timings;
    atomic_write(fs::path(out.target.string() + ".manifest.json"), m.dump(2) + "\n");
}

fs::path clean_target(const std::string& target) {
    fs::path p = fs::path(target).lexically_normal();
    if (p.has_filename()) return p;
    return p.parent_path();
}

Output single(const std::string& target, std::string body) {
    Output o;
    o.target = clean_target(target);
    o.files.emplace_back(o.target.filename().string(), std::move(body));
    return o;
}

// ---------------------------------------------------------------------------------
// Shared option groups

struct GraphArgs {
    std::string input;
    std::string attrs;
    bool undirected = false;
    std::string format = "plain";
};

void add_graph(CLI::App* sub, GraphArgs& a, bool required = true) {
    auto* in = sub->add_option("--input", a.input, "Edge file (`src dst layer` per line)")->check(CLI::ExistingFile);
    if (required) in->required();
    sub->add_option("--attrs", a.attrs, "Node attribute file (`node attribute` per line)")->check(CLI::ExistingFile);
    sub->add_flag("--undirected", a.undirected, "Treat edges as undirected");
    sub->add_option("--format", a.format, "Edge file layout")
        ->check(CLI::IsMember({"plain", "comune"}))
        ->capture_default_str();
}

LoadOptions load_options(const GraphArgs& a) {
    return {!a.undirected, a.format == "comune" ? EdgeFormat::comune : EdgeFormat::plain};
}

void record_graph(Context& ctx, const GraphArgs& a) {
    ctx.parameters["input"] = a.input;
    ctx.parameters["attrs"] = a.attrs.empty() ? json(nullptr) : json(a.attrs);
    ctx.parameters["undirected"] = a.undirected;
    ctx.parameters["format"] = a.format;
    ctx.inputs.push_back(a.input);
    if (!a.attrs.empty()) ctx.inputs.push_back(a.attrs);
}

void report_load(const Context& ctx, const LoadReport& rep) {
    if (rep.self_loops_dropped) ctx.note("dropped " + std::to_string(rep.self_loops_dropped) + " self-loops");
    if (rep.duplicates_merged) ctx.note("merged " + std::to_string(rep.duplicates_merged) + " duplicate edges");
    if (rep.unknown_attr_nodes)
        ctx.note("ignored attributes of " + std::to_string(rep.unknown_attr_nodes) + " unknown nodes");
}

MultiplexGraph load(Context& ctx, const GraphArgs& a) {
    record_graph(ctx, a);
    LoadReport rep;
    std::optional<fs::path> attrs;
    if (!a.attrs.empty()) attrs = a.attrs;
    auto g = ctx.stage("load", [&] { return load_graph(a.input, attrs, load_options(a), &rep); });
    report_load(ctx, rep);
    ctx.note(std::to_string(g.node_count()) + " nodes, " + std::to_string(g.edge_count()) + " edges, " +
             std::to_string(g.layer_count()) + " layers");
    return g;
}

LayerId layer_by_name(const MultiplexGraph& g, const std::string& name) {
    const auto id = g.layer_names().find(name);
    if (id == g.layer_names().size()) throw UsageError("unknown layer '" + name + "'");
    return static_cast<LayerId>(id);
}

std::vector<Edge> read_links(const fs::path& path, const MultiplexGraph& g) {
    std::vector<Edge> out;
    for (const auto& r : read_edge_records(path, EdgeFormat::plain)) {
        const auto u = g.node_names().find(r.src), v = g.node_names().find(r.dst);
        const auto l = g.layer_names().find(r.layer);
        if (u == g.node_names().size() || v == g.node_names().size())
            throw ParseError(path.string(), 0, "unknown node in link " + r.src + " " + r.dst);
        if (l == g.layer_names().size()) throw ParseError(path.string(), 0, "unknown layer '" + r.layer + "'");
        Edge e{static_cast<NodeId>(u), static_cast<NodeId>(v), static_cast<LayerId>(l)};
        if (!g.directed() && e.src > e.dst) std::swap(e.src, e.dst);
        out.push_back(e);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string edges_text(const MultiplexGraph& g) {
    std::ostringstream ss;
    write_edges(ss, g);
    return ss.str();
}

// ---------------------------------------------------------------------------------
// Subcommands

struct MineArgs {
    GraphArgs graph;
    std::uint64_t support = 0;
    std::size_t max_size = 4;
    std::uint64_t budget = kDefaultStateBudget;
    std::string out_format = "json";
    unsigned workers = 1;
    std::string out;
};

Output cmd_mine(Context& ctx, const MineArgs& a) {
    auto g = load(ctx, a.graph);
    MinerConfig cfg;
    cfg.min_support = a.support ? a.support : default_min_support(g);
    cfg.max_nodes = a.max_size;
    cfg.state_budget = a.budget;
    cfg.workers = a.workers;
    ctx.parameters["support"] = cfg.min_support;
    ctx.parameters["max_size"] = cfg.max_nodes;
    ctx.parameters["state_budget"] = cfg.state_budget;
    ctx.parameters["out_format"] = a.out_format;
    auto res = ctx.stage("mine", [&] { return mine(g, cfg); });
    ctx.note(std::to_string(res.patterns.size()) + " frequent patterns at support " +
             std::to_string(cfg.min_support));
    return single(a.out, a.out_format == "lg" ? patterns_to_lg(res.patterns, g) : patterns_to_json(res.patterns, g));
}

struct RuleFilterArgs {
    double min_conf = 0.0;
    double min_lift = 0.0;
    CLI::Option* min_lift_opt = nullptr;
    std::string layer;
};

void add_filter(CLI::App* sub, RuleFilterArgs& f) {
    sub->add_option("--min-conf", f.min_conf, "Keep rules with confidence >= this")->capture_default_str();
    f.min_lift_opt = sub->add_option("--min-lift", f.min_lift, "Keep rules with lift > this");
    sub->add_option("--layer", f.layer, "Keep rules whose consequent mentions this layer");
}

RuleFilter make_filter(Context& ctx, const RuleFilterArgs& f, const MultiplexGraph& g) {
    RuleFilter out;
    out.min_confidence = f.min_conf;
    ctx.parameters["min_conf"] = f.min_conf;
    if (f.min_lift_opt && f.min_lift_opt->count()) out.min_lift = f.min_lift;
    ctx.parameters["min_lift"] = out.min_lift ? json(*out.min_lift) : json(nullptr);
    if (!f.layer.empty()) out.layer = layer_by_name(g, f.layer);
    ctx.parameters["layer"] = f.layer.empty() ? json(nullptr) : json(f.layer);
    return out;
}

struct RulesArgs {
    GraphArgs graph;
    std::string patterns;
    RuleFilterArgs filter;
    std::string out;
};

Output cmd_rules(Context& ctx, const RulesArgs& a) {
    auto g = load(ctx, a.graph);
    ctx.parameters["patterns"] = a.patterns;
    ctx.inputs.push_back(a.patterns);
    auto filter = make_filter(ctx, a.filter, g);
    auto patterns = ctx.stage("read", [&] { return patterns_from_json(read_file(a.patterns), g, a.patterns); });
    auto rules = ctx.stage("rules", [&] { return build_rules(patterns, g); });
    std::vector<Rule> kept;
    for (auto& r : rules)
        if (passes(r, filter)) kept.push_back(std::move(r));
    ctx.note(std::to_string(kept.size()) + " of " + std::to_string(rules.size()) + " rules kept");
    return single(a.out, rules_to_json(kept, g));
}

struct PredictArgs {
    GraphArgs graph;
    std::string rules;
    std::string weighting = "conf";
    bool per_embedding = false;
    bool old_new = false;
    unsigned workers = 1;
    std::string out;
};

Output cmd_predict(Context& ctx, const PredictArgs& a) {
    auto g = load(ctx, a.graph);
    PredictOptions opt;
    opt.weighting = parse_weighting(a.weighting);
    opt.per_embedding = a.per_embedding;
    opt.workers = a.workers;
    ctx.parameters["rules"] = a.rules;
    ctx.parameters["weighting"] = a.weighting;
    ctx.parameters["per_embedding"] = a.per_embedding;
    ctx.parameters["old_new"] = a.old_new;
    ctx.inputs.push_back(a.rules);
    auto rules = ctx.stage("read", [&] { return rules_from_json(read_file(a.rules), g, a.rules); });
    if (a.old_new) {
        auto t = ctx.stage("predict", [&] { return score_old_new(g, rules, opt); });
        ctx.note(std::to_string(t.size()) + " old-new keys scored");
        return single(a.out, old_new_to_csv(t, g));
    }
    auto t = ctx.stage("predict", [&] { return score_links(g, rules, opt); });
    ctx.note(std::to_string(t.size()) + " links scored");
    return single(a.out, scores_to_csv(t, g));
}

struct BaselineArgs {
    GraphArgs graph;
    std::string method;
    bool per_layer = false;
    std::string out;
};

Output cmd_baseline(Context& ctx, const BaselineArgs& a) {
    auto g = load(ctx, a.graph);
    ctx.parameters["method"] = a.method;
    ctx.parameters["per_layer"] = a.per_layer;
    if (a.method == "sharma") {
        auto t = ctx.stage("score", [&] { return sharma_scores(g); });
        return single(a.out, scores_to_csv(t, g));
    }
    const auto method = parse_classical(a.method);
    const auto sg = collapse(g);
    auto t = ctx.stage("score", [&] { return classical_scores(sg, method); });
    if (!a.per_layer) return single(a.out, scores_to_csv(t, sg.as_multiplex()));
    std::vector<ScoredLink> entries;
    for (const auto& e : t.entries())
        for (LayerId l = 0; l < g.layer_count(); ++l) {
            Edge link{e.link.src, e.link.dst, l};
            if (!g.has_edge(link)) entries.push_back({link, e.score, {}});
        }
    std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) { return x.link < y.link; });
    return single(a.out, scores_to_csv(ScoreTable(t.tag(), std::move(entries)), g));
}

struct EnsembleArgs {
    GraphArgs graph;
    std::vector<std::string> scores;
    std::string truth;
    std::string candidates;
    std::string mode = "base";
    std::uint64_t seed = 7;
    std::string out;
};

Output cmd_ensemble(Context& ctx, const EnsembleArgs& a) {
    auto g = load(ctx, a.graph);
    if (a.scores.size() < 2) throw UsageError("ensemble needs at least two --scores files");
    const auto mode = parse_ensemble_mode(a.mode);
    ctx.seed = a.seed;
    ctx.parameters["scores"] = a.scores;
    ctx.parameters["truth"] = a.truth.empty() ? json(nullptr) : json(a.truth);
    ctx.parameters["candidates"] = a.candidates.empty() ? json(nullptr) : json(a.candidates);
    ctx.parameters["mode"] = a.mode;
    ctx.parameters["seed"] = a.seed;

    std::vector<ScoreTable> tables;
    ctx.stage("read", [&] {
        for (const auto& path : a.scores) {
            ctx.inputs.push_back(path);
            tables.push_back(scores_from_csv(read_file(path), g, fs::path(path).stem().string(), path));
        }
    });
    std::vector<Edge> truth, pool;
    if (!a.truth.empty()) {
        ctx.inputs.push_back(a.truth);
        truth = read_links(a.truth, g);
    }
    if (!a.candidates.empty()) {
        ctx.inputs.push_back(a.candidates);
        pool = read_links(a.candidates, g);
        pool.insert(pool.end(), truth.begin(), truth.end());
    } else {
        pool = truth;
        for (const auto& t : tables)
            for (const auto& e : t.entries()) pool.push_back(e.link);
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    auto res = ctx.stage("ensemble", [&] { return ensemble(tables, pool, truth, mode, a.seed); });
    std::ostringstream w;
    for (std::size_t i = 0; i < res.weights.size(); ++i) w << (i ? " " : "") << format_double(res.weights[i]);
    ctx.note("weights " + w.str());
    if (!std::isnan(res.auc)) ctx.note("AUC on truth " + format_double(res.auc));
    return single(a.out, scores_to_csv(res.scores, g));
}

struct EvaluateArgs {
    GraphArgs graph;
    std::string train;
    std::string test;
    std::string predictor = "magma";
    std::size_t folds = 10;
    std::uint64_t seed = 7;
    std::string negatives = "full";
    std::uint64_t support = 0;
    std::size_t max_size = 4;
    std::uint64_t budget = kDefaultStateBudget;
    std::string weighting = "conf";
    bool per_embedding = false;
    std::string ensemble_mode = "base";
    std::vector<std::string> members;
    bool collapse = false;
    bool old_new = false;
    unsigned workers = 1;
    std::string out;
};

json fold_json(const FoldOutcome& f) {
    json j;
    j["fold"] = f.report.fold;
    j["auc"] = f.report.auc;
    j["positives"] = f.report.positives;
    j["negatives"] = f.report.negatives;
    j["table_size"] = f.table_size;
    j["rules"] = f.rule_count;
    j["patterns"] = f.pattern_count;
    j["min_support"] = f.min_support;
    return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Output cmd_evaluate(Context& ctx, const EvaluateArgs& a) {
    PipelineConfig cfg;
    cfg.predictor = parse_predictor(a.predictor);
    cfg.weighting = parse_weighting(a.weighting);
    cfg.per_embedding = a.per_embedding;
    if (a.support) cfg.min_support = a.support;
    cfg.max_nodes = a.max_size;
    cfg.state_budget = a.budget;
    cfg.ensemble_mode = parse_ensemble_mode(a.ensemble_mode);
    for (const auto& m : a.members) cfg.members.push_back(parse_predictor(m));
    cfg.folds = a.folds;
    cfg.seed = a.seed;
    cfg.negatives = parse_negative_mode(a.negatives, a.seed);
    cfg.collapse = a.collapse;
    cfg.workers = a.workers;
    ctx.seed = a.seed;
    for (auto [k, v] : std::initializer_list<std::pair<const char*, json>>{
             {"predictor", a.predictor}, {"folds", a.folds}, {"seed", a.seed}, {"negatives", a.negatives},
             {"support", a.support ? json(a.support) : json("default")}, {"max_size", a.max_size},
             {"state_budget", a.budget}, {"weighting", a.weighting}, {"per_embedding", a.per_embedding},
             {"ensemble_mode", a.ensemble_mode}, {"members", a.members}, {"collapse", a.collapse},
             {"old_new", a.old_new}})
        ctx.parameters[k] = v;

    Output out;
    out.target = clean_target(a.out);
    out.directory = true;
    json summary;
    summary["predictor"] = a.predictor;

    const bool temporal = !a.train.empty() || !a.test.empty();
    if (temporal) {
        if (a.train.empty() || a.test.empty()) throw UsageError("temporal evaluation needs both --train and --test");
        if (!a.graph.input.empty()) throw UsageError("use either --input or --train/--test");
        ctx.parameters["train"] = a.train;
        ctx.parameters["test"] = a.test;
        ctx.parameters["attrs"] = a.graph.attrs.empty() ? json(nullptr) : json(a.graph.attrs);
        ctx.parameters["undirected"] = a.graph.undirected;
        ctx.inputs.push_back(a.train);
        ctx.inputs.push_back(a.test);
        std::optional<fs::path> attrs;
        if (!a.graph.attrs.empty()) {
            attrs = a.graph.attrs;
            ctx.inputs.push_back(a.graph.attrs);
        }
        auto split = ctx.stage("load", [&] { return load_temporal(a.train, a.test, attrs, load_options(a.graph)); });
        split.seed = a.seed;
        std::size_t cat[3] = {0, 0, 0};
        for (auto c : split.categories) ++cat[static_cast<int>(c)];
        ctx.note(std::to_string(split.test_positives.size()) + " new links: " + std::to_string(cat[0]) +
                 " old-old, " + std::to_string(cat[1]) + " old-new, " + std::to_string(cat[2]) + " new-new");
        summary["categories"] = {{"old_old", cat[0]}, {"old_new", cat[1]}, {"new_new", cat[2]}};

        if (a.old_new) {
            if (cfg.predictor != PredictorKind::magma) throw UsageError("--old-new needs --predictor magma");
            MinerConfig mc;
            mc.min_support = cfg.min_support.value_or(default_min_support(split.train));
            mc.max_nodes = cfg.max_nodes;
            mc.state_budget = cfg.state_budget;
            mc.workers = cfg.workers;
            auto patterns = ctx.stage("mine", [&] { return mine(split.train, mc).patterns; });
            auto rules = ctx.stage("rules", [&] { return build_rules(patterns, split.train); });
            auto table = ctx.stage("predict", [&] {
                return score_old_new(split.train, rules, {cfg.weighting, cfg.per_embedding, false, cfg.workers});
            });
            auto rep = ctx.stage("evaluate", [&] { return evaluate_old_new(table, split); });
            ctx.note("old-new AUC " + format_double(rep.auc));
            summary["old_new"] = true;
            summary["auc"] = rep.auc;
            summary["positives"] = rep.positives;
            summary["negatives"] = rep.negatives;
            summary["min_support"] = mc.min_support;
            summary["rules"] = rules.size();
            summary["table_size"] = table.size();
            out.files.emplace_back("old_new.roc.csv", roc_to_csv(rep));
        } else {
            std::vector<std::string> warnings;
            auto fold = ctx.stage("evaluate", [&] { return evaluate_split(split, cfg, &warnings); });
            ctx.note("AUC " + format_double(fold.report.auc));
            for (const auto& w : warnings) ctx.note(w);
            summary["old_new"] = false;
            summary["auc"] = fold.report.auc;
            summary["fold"] = fold_json(fold);
            summary["warnings"] = warnings;
            out.files.emplace_back("roc.csv", roc_to_csv(fold.report));
        }
    } else {
        if (a.graph.input.empty()) throw UsageError("evaluate needs --input or --train/--test");
        if (a.old_new) throw UsageError("--old-new needs a temporal split (--train/--test)");
        auto g = load(ctx, a.graph);
        auto res = ctx.stage("evaluate", [&] { return cross_validate(g, cfg); });
        for (const auto& w : res.warnings) ctx.note(w);
        json folds = json::array();
        for (const auto& f : res.folds) {
            folds.push_back(fold_json(f));
            std::ostringstream name;
            name << "fold_" << std::setw(2) << std::setfill('0') << f.report.fold << ".roc.csv";
            out.files.emplace_back(name.str(), roc_to_csv(f.report));
        }
        ctx.note("mean AUC " + format_double(res.summary.mean_auc) + ", pooled AUC " +
                 format_double(res.summary.pooled_auc));
        summary["folds"] = folds;
        summary["mean_auc"] = res.summary.mean_auc;
        summary["pooled_auc"] = res.summary.pooled_auc;
        summary["warnings"] = res.warnings;
    }
    out.files.emplace_back("summary.json", dump(summary));
    return out;
}

struct SynthArgs {
    std::vector<std::size_t> sizes{200, 150, 100, 50};
    std::size_t communities = 4;
    std::size_t community_size = 0;
    double p_in = 0.3;
    double p_out = 0.02;
    std::uint64_t seed = 1;
    bool growth = false;
    GrowthConfig g;
    std::string out;
};

Output cmd_gen_synth(Context& ctx, const SynthArgs& a) {
    ctx.seed = a.seed;
    ctx.parameters["seed"] = a.seed;
    if (a.growth) {
        GrowthConfig cfg = a.g;
        cfg.seed = a.seed;
        for (auto [k, v] : std::initializer_list<std::pair<const char*, json>>{
                 {"old_nodes", cfg.old_nodes}, {"hubs", cfg.hubs}, {"followers", cfg.followers_per_hub},
                 {"new_nodes", cfg.new_nodes}, {"hub_bias", cfg.hub_bias}, {"p_social", cfg.p_social}})
            ctx.parameters[k] = v;
        auto pair = ctx.stage("generate", [&] { return generate_growth(cfg); });
        std::ostringstream attrs;
        write_attrs(attrs, pair.test);
        Output o;
        o.target = clean_target(a.out);
        o.directory = true;
        o.files = {{"train.edges", edges_text(pair.train)},
                   {"test.edges", edges_text(pair.test)},
                   {"attrs.txt", attrs.str()}};
        return o;
    }
    SynthConfig cfg;
    cfg.layer_sizes = a.sizes;
    cfg.communities = a.communities;
    cfg.community_size = a.community_size;
    cfg.p_in = a.p_in;
    cfg.p_out = a.p_out;
    cfg.seed = a.seed;
    ctx.parameters["sizes"] = a.sizes;
    ctx.parameters["communities"] = a.communities;
    ctx.parameters["community_size"] = a.community_size;
    ctx.parameters["pin"] = a.p_in;
    ctx.parameters["pout"] = a.p_out;
    validate(cfg);
    auto g = ctx.stage("generate", [&] { return generate(cfg); });
    ctx.note(std::to_string(g.edge_count()) + " edges");
    return single(a.out, edges_text(g));
}

struct TransformArgs {
    GraphArgs graph;
    std::string to;
    std::string out;
};

Output cmd_transform(Context& ctx, const TransformArgs& a) {
    ctx.parameters["to"] = a.to;
    if (a.to == "coupled") {
        auto g = load(ctx, a.graph);
        auto cg = ctx.stage("transform", [&] { return to_coupled(g); });
        if (!cg.isolated.empty()) ctx.note(std::to_string(cg.isolated.size()) + " isolated nodes are not encoded");
        return single(a.out, edges_text(cg.graph));
    }
    // Coupled edge file back to a multiplex graph: replica `node@layer` carries its layer.
    record_graph(ctx, a.graph);
    auto recs = ctx.stage("load", [&] { return read_edge_records(a.graph.input, load_options(a.graph).format); });
    std::map<std::string, std::string> physical_attr;
    if (!a.graph.attrs.empty())
        for (auto& [n, v] : read_attr_records(a.graph.attrs)) physical_attr[n] = v;
    auto split_name = [](const std::string& r) {
        const auto at = r.rfind('@');
        if (at == std::string::npos || at == 0 || at + 1 == r.size())
            throw StructuralError("replica name '" + r + "' is not of the form node@layer");
        return std::pair{r.substr(0, at), r.substr(at + 1)};
    };
    std::vector<std::pair<std::string, std::string>> replica_attrs;
    for (const auto& r : recs)
        for (const auto* name : {&r.src, &r.dst}) replica_attrs.emplace_back(*name, split_name(*name).second);
    std::sort(replica_attrs.begin(), replica_attrs.end());
    replica_attrs.erase(std::unique(replica_attrs.begin(), replica_attrs.end()), replica_attrs.end());
    CoupledMultigraph cg;
    cg.graph = std::move(build_graphs({recs}, replica_attrs, !a.graph.undirected).front());
    cg.replicas.resize(cg.graph.universe_size());
    for (std::size_t r = 0; r < cg.graph.universe_size(); ++r) {
        auto node = split_name(cg.graph.node_names().name(r)).first;
        auto it = physical_attr.find(node);
        cg.replicas[r] = {node, it == physical_attr.end() ? std::string(kDefaultAttribute) : it->second};
    }
    auto g = ctx.stage("transform", [&] { return from_coupled(cg); });
    return single(a.out, edges_text(g));
}

struct InspectArgs {
    GraphArgs graph;
    std::string rules;
    RuleFilterArgs filter;
    std::size_t top = 0;
    std::string out;
};

std::string edge_text(const PatternEdge& e, bool directed, const MultiplexGraph& g) {
    return std::to_string(e.src) + (directed ? ">" : "-") + std::to_string(e.dst) + ":" + g.layer_names().name(e.layer);
}

// Pattern in slot order, numbered like the rule's delta edge.
std::string pattern_text(const Pattern& p, const MultiplexGraph& g) {
    std::string out;
    for (std::size_t s = 0; s < p.node_count(); ++s) out += (s ? "," : "") + g.attr_names().name(p.attr(static_cast<Slot>(s)));
    out += '|';
    bool first = true;
    for (const auto& e : p.edges()) {
        if (!first) out += ',';
        first = false;
        out += edge_text(e, p.directed(), g);
    }
    return out;
}

std::string cmd_inspect_text(Context& ctx, const InspectArgs& a) {
    auto g = load(ctx, a.graph);
    ctx.parameters["rules"] = a.rules;
    ctx.parameters["top"] = a.top;
    ctx.inputs.push_back(a.rules);
    auto filter = make_filter(ctx, a.filter, g);
    auto rules = ctx.stage("read", [&] { return rules_from_json(read_file(a.rules), g, a.rules); });
    std::vector<const Rule*> kept;
    for (const auto& r : rules)
        if (passes(r, filter)) kept.push_back(&r);
    std::stable_sort(kept.begin(), kept.end(), [](const Rule* x, const Rule* y) {
        const bool nx = std::isnan(x->lift), ny = std::isnan(y->lift);
        if (nx != ny) return ny;
        if (!nx && x->lift != y->lift) return x->lift > y->lift;
        return x->id < y->id;
    });
    if (a.top && kept.size() > a.top) kept.resize(a.top);
    std::ostringstream ss;
    ss << "id\tconfidence\tlift\tnew_node\tantecedent\tconsequent\tdelta\n";
    for (const Rule* r : kept)
        ss << r->id << '\t' << format_double(r->confidence) << '\t' << format_double(r->lift) << '\t'
           << (r->new_node ? "yes" : "no") << '\t'
           << pattern_text(r->antecedent, g) << '\t' << pattern_text(r->consequent, g) << '\t'
           << edge_text(r->delta_edge, r->consequent.directed(), g) << '\n';
    ctx.note(std::to_string(kept.size()) + " rules listed");
    return ss.str();
}

// ---------------------------------------------------------------------------------

struct Digests {
    bool directory = false;
    std::map<std::string, std::string> files;
};

Digests digest_target(const fs::path& target) {
    Digests d;
    d.directory = fs::is_directory(target);
    if (d.directory) {
        for (const auto& entry : fs::directory_iterator(target))
            if (entry.is_regular_file())
                d.files[entry.path().filename().string()] = sha256_hex(read_file(entry.path()));
    } else {
        d.files[target.filename().string()] = sha256_hex(read_file(target));
    }
    return d;
}

int cmd_replay(const std::string& manifest_path, const std::string& out_override, std::ostream& out,
               std::ostream& err) {
    json m;
    try {
        m = json::parse(read_file(manifest_path));
    } catch (const json::exception& e) {
        throw ParseError(manifest_path, 0, e.what());
    }
    if (!m.contains("argv") || !m.contains("outputs")) throw ParseError(manifest_path, 0, "not a run manifest");
    auto argv = m["argv"].get<std::vector<std::string>>();

    bool changed_inputs = false;
    for (const auto& [path, digest] : m["inputs"].items()) {
        if (!fs::exists(path) || sha256_hex(read_file(path)) != digest.get<std::string>()) {
            err << "muxrule: replay: input changed since the recorded run: " << path << '\n';
            changed_inputs = true;
        }
    }
    if (changed_inputs) return Status::mismatch;

    const fs::path original = m["target"].get<std::string>();
    fs::path target = out_override;
    const bool scratch = target.empty();
    if (scratch)
        target = fs::temp_directory_path() /
                 ("muxrule-replay-" + std::to_string(::getpid()) + "-" + original.filename().string());
    bool replaced = false;
    for (std::size_t i = 0; i < argv.size(); ++i) {
        if (argv[i] == "--out" && i + 1 < argv.size()) {
            argv[i + 1] = target.string();
            replaced = true;
        } else if (argv[i].rfind("--out=", 0) == 0) {
            argv[i] = "--out=" + target.string();
            replaced = true;
        }
    }
    if (!replaced) argv.insert(argv.end(), {"--out", target.string()});

    // Restore the recorded environment overrides for the duration of the replay.
    std::vector<std::pair<std::string, std::optional<std::string>>> saved;
    for (const auto& [k, v] : m["env"].items()) {
        const char* old = std::getenv(k.c_str());
        saved.emplace_back(k, old ? std::optional<std::string>(old) : std::nullopt);
        ::setenv(k.c_str(), v.get<std::string>().c_str(), 1);
    }
    if (std::find(argv.begin(), argv.end(), "--quiet") == argv.end()) argv.insert(argv.begin(), "--quiet");
    const int rc = run(argv, out, err);
    for (const auto& [k, v] : saved) {
        if (v) ::setenv(k.c_str(), v->c_str(), 1);
        else ::unsetenv(k.c_str());
    }
    if (rc != Status::ok) return rc;

    const auto got = digest_target(target);
    int status = Status::ok;
    const bool want_dir = m["directory"].get<bool>();
    if (want_dir) {
        for (const auto& [name, digest] : m["outputs"].items()) {
            auto it = got.files.find(name);
            if (it == got.files.end() || it->second != digest.get<std::string>()) {
                err << "muxrule: replay: " << name << " differs\n";
                status = Status::mismatch;
            }
        }
        if (got.files.size() != m["outputs"].size()) status = Status::mismatch;
    } else if (got.files.size() != 1 || got.files.begin()->second != m["outputs"].begin().value().get<std::string>()) {
        err << "muxrule: replay: " << original.filename().string() << " differs\n";
        status = Status::mismatch;
    }
    if (status == Status::ok)
        err << "muxrule: replay: " << got.files.size() << " output file(s) identical\n";
    if (scratch) {
        std::error_code ec;
        fs::remove_all(target, ec);
        fs::remove(fs::path(target.string() + ".manifest.json"), ec);
    }
    return status;
}

} // namespace

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw IoError("SHA-256 computation failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multiplex graph association rules for link prediction", "muxrule"};
    app.require_subcommand(1);
    app.set_version_flag("--version", MUXRULE_VERSION);
    bool quiet = false;
    app.add_flag("--quiet", quiet, "Suppress progress messages");

    MineArgs mine_a;
    auto* mine_c = app.add_subcommand("mine", "Mine frequent multiplex patterns");
    add_graph(mine_c, mine_a.graph);
    mine_c->add_option("--support", mine_a.support, "Minimum image support (default: smallest layer node count)");
    mine_c->add_option("--max-size", mine_a.max_size, "Largest pattern, in nodes")->capture_default_str();
    mine_c->add_option("--state-budget", mine_a.budget, "Partial-state cap per support count (0 = none)")
        ->capture_default_str();
    mine_c->add_option("--out-format", mine_a.out_format, "Pattern file format")
        ->check(CLI::IsMember({"json", "lg"}))
        ->capture_default_str();
    mine_c->add_option("--workers", mine_a.workers, "Worker threads")->capture_default_str();
    mine_c->add_option("--out", mine_a.out, "Pattern file")->required();

    RulesArgs rules_a;
    auto* rules_c = app.add_subcommand("rules", "Build association rules from a pattern file");
    add_graph(rules_c, rules_a.graph);
    rules_c->add_option("--patterns", rules_a.patterns, "Pattern file from `mine`")->required()->check(CLI::ExistingFile);
    add_filter(rules_c, rules_a.filter);
    rules_c->add_option("--out", rules_a.out, "Rule file")->required();

    PredictArgs pred_a;
    auto* pred_c = app.add_subcommand("predict", "Score unobserved links with a rule file");
    add_graph(pred_c, pred_a.graph);
    pred_c->add_option("--rules", pred_a.rules, "Rule file from `rules`")->required()->check(CLI::ExistingFile);
    pred_c->add_option("--weighting", pred_a.weighting, "count, conf, lift, conf-mean or lift-mean")
        ->capture_default_str();
    pred_c->add_flag("--per-embedding", pred_a.per_embedding, "Count every antecedent embedding");
    pred_c->add_flag("--old-new", pred_a.old_new, "Score links to unseen nodes instead");
    pred_c->add_option("--workers", pred_a.workers, "Worker threads")->capture_default_str();
    pred_c->add_option("--out", pred_a.out, "Score CSV")->required();

    BaselineArgs base_a;
    auto* base_c = app.add_subcommand("baseline", "Score links with a reference predictor");
    add_graph(base_c, base_a.graph);
    base_c->add_option("--method", base_a.method, "sharma, cn, aa, ra, pa or ja")
        ->required()
        ->check(CLI::IsMember({"sharma", "cn", "aa", "ra", "pa", "ja"}));
    base_c->add_flag("--per-layer", base_a.per_layer, "Repeat single-layer scores on every layer");
    base_c->add_option("--out", base_a.out, "Score CSV")->required();

    EnsembleArgs ens_a;
    auto* ens_c = app.add_subcommand("ensemble", "Combine score files");
    add_graph(ens_c, ens_a.graph);
    ens_c->add_option("--scores", ens_a.scores, "Score CSVs (two or more)")->required()->check(CLI::ExistingFile);
    ens_c->add_option("--truth", ens_a.truth, "Links known to be positive (needed for --mode over)")
        ->check(CLI::ExistingFile);
    ens_c->add_option("--candidates", ens_a.candidates, "Links to score (default: union of the inputs)")
        ->check(CLI::ExistingFile);
    ens_c->add_option("--mode", ens_a.mode, "base or over")->check(CLI::IsMember({"base", "over"}))->capture_default_str();
    ens_c->add_option("--seed", ens_a.seed, "Annealing seed")->capture_default_str();
    ens_c->add_option("--out", ens_a.out, "Score CSV")->required();

    EvaluateArgs eval_a;
    auto* eval_c = app.add_subcommand("evaluate", "Cross-validated or temporal ROC/AUC evaluation");
    add_graph(eval_c, eval_a.graph, false);
    eval_c->add_option("--train", eval_a.train, "Training edge file (temporal split)")->check(CLI::ExistingFile);
    eval_c->add_option("--test", eval_a.test, "Later edge file (temporal split)")->check(CLI::ExistingFile);
    eval_c->add_option("--predictor", eval_a.predictor, "magma, sharma, cn, aa, ra, pa, ja or ensemble")
        ->capture_default_str();
    eval_c->add_option("--folds", eval_a.folds, "Cross-validation folds")->capture_default_str();
    eval_c->add_option("--seed", eval_a.seed, "Split and sampling seed")->capture_default_str();
    eval_c->add_option("--negatives", eval_a.negatives, "full or sampled:K")->capture_default_str();
    eval_c->add_option("--support", eval_a.support, "Minimum image support (default: per training graph)");
    eval_c->add_option("--max-size", eval_a.max_size, "Largest pattern, in nodes")->capture_default_str();
    eval_c->add_option("--state-budget", eval_a.budget, "Partial-state cap per support count")->capture_default_str();
    eval_c->add_option("--weighting", eval_a.weighting, "Rule weighting")->capture_default_str();
    eval_c->add_flag("--per-embedding", eval_a.per_embedding, "Count every antecedent embedding");
    eval_c->add_option("--ensemble-mode", eval_a.ensemble_mode, "base or over")->capture_default_str();
    eval_c->add_option("--members", eval_a.members, "Ensemble inputs (default: all predictors)");
    eval_c->add_flag("--collapse", eval_a.collapse, "Evaluate on the single-layer union of the layers");
    eval_c->add_flag("--old-new", eval_a.old_new, "Evaluate links to unseen nodes (temporal split)");
    eval_c->add_option("--workers", eval_a.workers, "Worker threads")->capture_default_str();
    eval_c->add_option("--out", eval_a.out, "Output directory")->required();

    SynthArgs syn_a;
    auto* syn_c = app.add_subcommand("gen-synth", "Generate a synthetic benchmark");
    syn_c->add_option("--sizes", syn_a.sizes, "Layer node counts")->delimiter(',')->capture_default_str();
    syn_c->add_option("--communities", syn_a.communities, "Communities per layer")->capture_default_str();
    syn_c->add_option("--community-size", syn_a.community_size, "Nodes per community (overrides --communities)");
    syn_c->add_option("--pin", syn_a.p_in, "Intra-community edge probability")->capture_default_str();
    syn_c->add_option("--pout", syn_a.p_out, "Inter-community edge probability")->capture_default_str();
    syn_c->add_option("--seed", syn_a.seed, "Generator seed")->capture_default_str();
    syn_c->add_flag("--growth", syn_a.growth, "Emit the growth scenario (train/test/attrs) into an --out directory");
    syn_c->add_option("--old-nodes", syn_a.g.old_nodes, "Growth: core nodes")->capture_default_str();
    syn_c->add_option("--hubs", syn_a.g.hubs, "Growth: hubs among the core nodes")->capture_default_str();
    syn_c->add_option("--followers", syn_a.g.followers_per_hub, "Growth: followers per hub")->capture_default_str();
    syn_c->add_option("--new-nodes", syn_a.g.new_nodes, "Growth: nodes arriving in the test period")
        ->capture_default_str();
    syn_c->add_option("--hub-bias", syn_a.g.hub_bias, "Growth: probability a newcomer follows a hub")
        ->capture_default_str();
    syn_c->add_option("--p-social", syn_a.g.p_social, "Growth: social layer edge probability")->capture_default_str();
    syn_c->add_option("--out", syn_a.out, "Edge file (directory with --growth)")->required();

    TransformArgs tr_a;
    auto* tr_c = app.add_subcommand("transform", "Convert between multiplex and coupled multigraph encodings");
    add_graph(tr_c, tr_a.graph);
    tr_c->add_option("--to", tr_a.to, "coupled or multiplex")->required()->check(CLI::IsMember({"coupled", "multiplex"}));
    tr_c->add_option("--out", tr_a.out, "Edge file")->required();

    InspectArgs ins_a;
    auto* ins_c = app.add_subcommand("inspect", "List rules sorted by lift");
    add_graph(ins_c, ins_a.graph);
    ins_c->add_option("--rules", ins_a.rules, "Rule file")->required()->check(CLI::ExistingFile);
    add_filter(ins_c, ins_a.filter);
    ins_c->add_option("--top", ins_a.top, "Show at most this many rules (0 = all)");
    ins_c->add_option("--out", ins_a.out, "Write the listing here instead of stdout");

    std::string replay_manifest, replay_out;
    auto* rep_c = app.add_subcommand("replay", "Re-run a recorded command and compare outputs");
    rep_c->add_option("--manifest", replay_manifest, "Manifest written next to an output")
        ->required()
        ->check(CLI::ExistingFile);
    rep_c->add_option("--out", replay_out, "Where to write the replayed output (default: a scratch path)");

    std::vector<std::pair<CLI::App*, std::vector<std::string>>> env_names;
    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
        std::vector<std::string> names;
        for (auto* opt : sub->get_options()) {
            const auto& l = opt->get_lnames();
            if (l.empty() || l.front() == "help") continue;
            names.push_back(env_name(l.front()));
            opt->envname(names.back());
        }
        env_names.emplace_back(sub, std::move(names));
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Status::ok : Status::usage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    Context ctx;
    ctx.command = chosen->get_name();
    ctx.argv = args;
    ctx.err = &err;
    ctx.quiet = quiet;
    for (const auto& [sub, names] : env_names) {
        if (sub != chosen) continue;
        for (const auto& n : names)
            if (const char* v = std::getenv(n.c_str())) ctx.env[n] = v;
    }

    try {
        if (chosen == rep_c) return cmd_replay(replay_manifest, replay_out, out, err);
        if (chosen == ins_c) {
            auto text = cmd_inspect_text(ctx, ins_a);
            if (ins_a.out.empty()) {
                out << text;
                return Status::ok;
            }
            commit(ctx, single(ins_a.out, std::move(text)));
            return Status::ok;
        }
        Output o;
        if (chosen == mine_c) o = cmd_mine(ctx, mine_a);
        else if (chosen == rules_c) o = cmd_rules(ctx, rules_a);
        else if (chosen == pred_c) o = cmd_predict(ctx, pred_a);
        else if (chosen == base_c) o = cmd_baseline(ctx, base_a);
        else if (chosen == ens_c) o = cmd_ensemble(ctx, ens_a);
        else if (chosen == eval_c) o = cmd_evaluate(ctx, eval_a);
        else if (chosen == syn_c) o = cmd_gen_synth(ctx, syn_a);
        else if (chosen == tr_c) o = cmd_transform(ctx, tr_a);
        commit(ctx, o);
        ctx.note("wrote " + o.target.string());
        return Status::ok;
    } catch (const UsageError& e) {
        err << "muxrule: usage error: " << e.what() << '\n';
        return Status::usage;
    } catch (const ParseError& e) {
        err << "muxrule: parse error: " << e.what() << '\n';
        return Status::parse;
    } catch (const ResourceError& e) {
        err << "muxrule: resource limit: " << e.what() << '\n';
        return Status::resource;
    } catch (const EvaluationError& e) {
        err << "muxrule: evaluation error: " << e.what() << '\n';
        return Status::evaluation;
    } catch (const StructuralError& e) {
        err << "muxrule: structural error: " << e.what() << '\n';
        return Status::structural;
    } catch (const IoError& e) {
        err << "muxrule: I/O error: " << e.what() << '\n';
        return Status::io;
    } catch (const fs::filesystem_error& e) {
        err << "muxrule: I/O error: " << e.what() << '\n';
        return Status::io;
    } catch (const std::exception& e) {
        err << "muxrule: error: " << e.what() << '\n';
        return Status::error;
    }
}

} // namespace muxrule::cli
