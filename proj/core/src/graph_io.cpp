#include "muxrule/graph_io.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "muxrule/error.hpp"

namespace muxrule {

namespace {

std::vector<std::string> tokens_of(const std::string& raw) {
    std::string line = raw.substr(0, raw.find('#'));
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(std::move(tok));
    return out;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");
    return in;
}

} // namespace

std::vector<EdgeRecord> read_edge_records(const std::filesystem::path& path, EdgeFormat format) {
    auto in = open_or_throw(path);
    std::vector<EdgeRecord> out;
    std::string raw;
    for (std::size_t lineno = 1; std::getline(in, raw); ++lineno) {
        auto tok = tokens_of(raw);
        if (tok.empty()) continue;
        if (format == EdgeFormat::plain) {
            if (tok.size() != 3) throw ParseError(path.string(), lineno, "expected `src dst layer`");
            out.push_back({tok[0], tok[1], tok[2]});
        } else {
            if (tok.size() != 3 && tok.size() != 4)
                throw ParseError(path.string(), lineno, "expected `layer src dst [weight]`");
            out.push_back({tok[1], tok[2], tok[0]});
        }
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> read_attr_records(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string raw;
    for (std::size_t lineno = 1; std::getline(in, raw); ++lineno) {
        auto tok = tokens_of(raw);
        if (tok.empty()) continue;
        if (tok.size() != 2) throw ParseError(path.string(), lineno, "expected `node attribute`");
        out.emplace_back(tok[0], tok[1]);
    }
    return out;
}

std::vector<MultiplexGraph> build_graphs(const std::vector<std::vector<EdgeRecord>>& edge_sets,
                                         const std::vector<std::pair<std::string, std::string>>& attrs,
                                         bool directed, LoadReport* report) {
    LoadReport local;
    LoadReport& rep = report ? *report : local;

    std::vector<std::string> node_list;
    std::vector<std::string> layer_list;
    for (const auto& set : edge_sets)
        for (const auto& r : set) {
            node_list.push_back(r.src);
            node_list.push_back(r.dst);
            layer_list.push_back(r.layer);
        }
    Dictionary nodes(std::move(node_list));
    Dictionary layers(std::move(layer_list));

    std::map<std::size_t, std::string> assigned;
    for (const auto& [node, attr] : attrs) {
        std::size_t id = nodes.find(node);
        if (id == nodes.size()) {
            ++rep.unknown_attr_nodes;
            continue;
        }
        assigned[id] = attr;
    }
    if (rep.unknown_attr_nodes > 0)
        rep.warnings.push_back(std::to_string(rep.unknown_attr_nodes) + " attribute line(s) name unknown nodes");

    std::vector<std::string> attr_list{std::string(kDefaultAttribute)};
    for (const auto& [id, a] : assigned) attr_list.push_back(a);
    Dictionary attr_dict(std::move(attr_list));
    const auto dflt = static_cast<AttrId>(attr_dict.find(kDefaultAttribute));
    std::vector<AttrId> node_attr(nodes.size(), dflt);
    for (const auto& [id, a] : assigned) node_attr[id] = static_cast<AttrId>(attr_dict.find(a));

    std::vector<MultiplexGraph> graphs;
    for (const auto& set : edge_sets) {
        std::vector<Edge> edges;
        std::vector<NodeId> loop_nodes;
        edges.reserve(set.size());
        for (const auto& r : set) {
            const auto u = static_cast<NodeId>(nodes.find(r.src));
            const auto v = static_cast<NodeId>(nodes.find(r.dst));
            if (u == v) {
                ++rep.self_loops_dropped;
                loop_nodes.push_back(u);
                continue;
            }
            edges.push_back(Edge{u, v, static_cast<LayerId>(layers.find(r.layer))});
        }
        MultiplexGraph g(directed, nodes, layers, attr_dict, node_attr, edges, loop_nodes);
        const std::size_t stored_in = directed ? edges.size() : 0;
        if (directed && stored_in > g.stored_edges().size()) rep.duplicates_merged += stored_in - g.stored_edges().size();
        if (!directed && edges.size() > g.edge_count()) rep.duplicates_merged += edges.size() - g.edge_count();
        graphs.push_back(std::move(g));
    }
    if (rep.self_loops_dropped > 0)
        rep.warnings.push_back(std::to_string(rep.self_loops_dropped) + " self-loop(s) dropped");
    return graphs;
}

MultiplexGraph load_graph(const std::filesystem::path& edge_path,
                          const std::optional<std::filesystem::path>& attr_path, const LoadOptions& options,
                          LoadReport* report) {
    std::vector<std::vector<EdgeRecord>> sets{read_edge_records(edge_path, options.format)};
    std::vector<std::pair<std::string, std::string>> attrs;
    if (attr_path) attrs = read_attr_records(*attr_path);
    return std::move(build_graphs(sets, attrs, options.directed, report).front());
}

void write_edges(std::ostream& out, const MultiplexGraph& g) {
    for (const Edge& e : g.logical_edges())
        out << g.node_names().name(e.src) << ' ' << g.node_names().name(e.dst) << ' '
            << g.layer_names().name(e.layer) << '\n';
}

void write_attrs(std::ostream& out, const MultiplexGraph& g) {
    for (NodeId u : g.nodes()) out << g.node_names().name(u) << ' ' << g.attr_names().name(g.attr(u)) << '\n';
}

} // namespace muxrule
