#include "muxrule/serialize.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "muxrule/error.hpp"

namespace muxrule {

using nlohmann::json;

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

namespace {

std::size_t lookup(const Dictionary& d, const std::string& name, std::string_view what, std::string_view source) {
    const std::size_t id = d.find(name);
    if (id == d.size()) throw ParseError(std::string(source), 0, "unknown " + std::string(what) + " '" + name + "'");
    return id;
}

json pattern_json(const Pattern& p, const MultiplexGraph& g) {
    json nodes = json::array(), edges = json::array();
    for (AttrId a : p.attrs()) nodes.push_back(g.attr_names().name(a));
    for (const auto& e : p.edges()) edges.push_back({e.src, e.dst, g.layer_names().name(e.layer)});
    return {{"directed", p.directed()},
            {"nodes", nodes},
            {"edges", edges},
            {"support", p.support},
            {"code", code_string(p, g.attr_names(), g.layer_names())}};
}

Pattern pattern_from(const json& j, const MultiplexGraph& g, std::string_view source) {
    std::vector<AttrId> attrs;
    for (const auto& a : j.at("nodes"))
        attrs.push_back(static_cast<AttrId>(lookup(g.attr_names(), a.get<std::string>(), "attribute", source)));
    std::vector<PatternEdge> edges;
    for (const auto& e : j.at("edges")) {
        const auto s = e.at(0).get<unsigned>(), d = e.at(1).get<unsigned>();
        if (s >= attrs.size() || d >= attrs.size())
            throw ParseError(std::string(source), 0, "edge endpoint outside the pattern");
        edges.push_back({static_cast<Slot>(s), static_cast<Slot>(d),
                         static_cast<LayerId>(lookup(g.layer_names(), e.at(2).get<std::string>(), "layer", source))});
    }
    Pattern p(j.value("directed", g.directed()), std::move(attrs), std::move(edges));
    p.support = j.value("support", std::uint64_t{0});
    return p;
}

json parse(std::string_view text, std::string_view source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(source), 0, e.what());
    }
}

template <typename F>
auto guarded(std::string_view source, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw ParseError(std::string(source), 0, e.what());
    }
}

} // namespace

std::string patterns_to_json(const std::vector<Pattern>& patterns, const MultiplexGraph& g) {
    json out = json::array();
    for (const auto& p : patterns) out.push_back(pattern_json(p, g));
    return out.dump(1) + "\n";
}

std::vector<Pattern> patterns_from_json(std::string_view text, const MultiplexGraph& g, std::string_view source) {
    const json j = parse(text, source);
    return guarded(source, [&] {
        std::vector<Pattern> out;
        for (const auto& rec : j) out.push_back(pattern_from(rec, g, source));
        return out;
    });
}

std::string patterns_to_lg(const std::vector<Pattern>& patterns, const MultiplexGraph& g) {
    std::ostringstream os;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        const auto& p = patterns[i];
        os << "t # " << i << " s " << p.support << '\n';
        for (std::size_t s = 0; s < p.node_count(); ++s)
            os << "v " << s << ' ' << g.attr_names().name(p.attr(static_cast<Slot>(s))) << '\n';
        for (const auto& e : p.edges())
            os << "e " << unsigned(e.src) << ' ' << unsigned(e.dst) << ' ' << g.layer_names().name(e.layer) << '\n';
    }
    return os.str();
}

std::string rules_to_json(const std::vector<Rule>& rules, const MultiplexGraph& g) {
    json out = json::array();
    for (const auto& r : rules) {
        json rec = {{"id", r.id},
                    {"antecedent", pattern_json(r.antecedent, g)},
                    {"consequent", pattern_json(r.consequent, g)},
                    {"delta_edge", {r.delta_edge.src, r.delta_edge.dst, g.layer_names().name(r.delta_edge.layer)}},
                    {"new_node", r.new_node},
                    {"confidence", r.confidence}};
        rec["lift"] = std::isfinite(r.lift) ? json(r.lift) : json(nullptr);
        out.push_back(std::move(rec));
    }
    return out.dump(1) + "\n";
}

std::vector<Rule> rules_from_json(std::string_view text, const MultiplexGraph& g, std::string_view source) {
    const json j = parse(text, source);
    return guarded(source, [&] {
        std::vector<Rule> out;
        for (const auto& rec : j) {
            Rule r;
            r.id = rec.at("id").get<std::size_t>();
            r.antecedent = pattern_from(rec.at("antecedent"), g, source);
            r.consequent = pattern_from(rec.at("consequent"), g, source);
            const auto& d = rec.at("delta_edge");
            r.delta_edge = {static_cast<Slot>(d.at(0).get<unsigned>()), static_cast<Slot>(d.at(1).get<unsigned>()),
                            static_cast<LayerId>(lookup(g.layer_names(), d.at(2).get<std::string>(), "layer", source))};
            if (!r.consequent.has_edge(r.delta_edge.src, r.delta_edge.dst, r.delta_edge.layer))
                throw ParseError(std::string(source), 0, "delta edge missing from consequent of rule " +
                                                              std::to_string(r.id));
            r.new_node = rec.at("new_node").get<bool>();
            r.confidence = rec.at("confidence").get<double>();
            r.lift = rec.at("lift").is_null() ? std::nan("") : rec.at("lift").get<double>();
            out.push_back(std::move(r));
        }
        return out;
    });
}

std::string scores_to_csv(const ScoreTable& t, const MultiplexGraph& g) {
    std::string out = "src,dst,layer,score\n";
    for (const auto& e : t.entries()) {
        out += g.node_names().name(e.link.src);
        out += ',';
        out += g.node_names().name(e.link.dst);
        out += ',';
        out += g.layer_names().name(e.link.layer);
        out += ',';
        out += format_double(e.score);
        out += '\n';
    }
    return out;
}

ScoreTable scores_from_csv(std::string_view text, const MultiplexGraph& g, std::string tag, std::string_view source) {
    std::vector<ScoredLink> entries;
    std::istringstream is{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (lineno == 1 || line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
        if (f.size() != 4) throw ParseError(std::string(source), lineno, "expected 4 fields");
        auto node = [&](const std::string& n) {
            const auto id = g.node_names().find(n);
            if (id == g.node_names().size()) throw ParseError(std::string(source), lineno, "unknown node '" + n + "'");
            return static_cast<NodeId>(id);
        };
        const auto l = g.layer_names().find(f[2]);
        if (l == g.layer_names().size()) throw ParseError(std::string(source), lineno, "unknown layer '" + f[2] + "'");
        double score = 0;
        try {
            std::size_t used = 0;
            score = std::stod(f[3], &used);
            if (used != f[3].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ParseError(std::string(source), lineno, "bad score '" + f[3] + "'");
        }
        entries.push_back({Edge{node(f[0]), node(f[1]), static_cast<LayerId>(l)}, score, {}});
    }
    return ScoreTable(std::move(tag), std::move(entries));
}

std::string old_new_to_csv(const OldNewScoreTable& t, const MultiplexGraph& g) {
    std::string out = "node,layer,direction,score\n";
    for (const auto& e : t.entries()) {
        out += g.node_names().name(e.key.node);
        out += ',';
        out += g.layer_names().name(e.key.layer);
        out += ',';
        out += to_string(e.key.direction);
        out += ',';
        out += format_double(e.score);
        out += '\n';
    }
    return out;
}

std::string roc_to_csv(const EvalReport& r) {
    std::string out = "fpr,tpr,threshold\n";
    for (const auto& p : r.roc) out += format_double(p.fpr) + ',' + format_double(p.tpr) + ',' + format_double(p.threshold) + '\n';
    return out;
}

std::string report_to_json(const EvalReport& r) {
    json j = {{"predictor", r.predictor}, {"fold", r.fold},        {"auc", r.auc},
              {"positives", r.positives}, {"negatives", r.negatives}, {"old_new", r.old_new}};
    return j.dump(1) + "\n";
}

} // namespace muxrule
