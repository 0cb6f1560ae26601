#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "muxrule/graph.hpp"

namespace muxrule {

enum class EdgeFormat {
    /// `src dst layer`
    plain,
    /// CoMuNe ordering `layer src dst weight`; the weight is ignored.
    comune,
};

struct LoadOptions {
    bool directed = true;
    EdgeFormat format = EdgeFormat::plain;
};

/// Counters for the lenient parts of loading.
struct LoadReport {
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_merged = 0;
    std::size_t unknown_attr_nodes = 0;
    std::vector<std::string> warnings;
};

struct EdgeRecord {
    std::string src;
    std::string dst;
    std::string layer;
};

/// Parses an edge file into raw string records. `#` starts a comment.
std::vector<EdgeRecord> read_edge_records(const std::filesystem::path& path, EdgeFormat format);
/// Parses `node attribute` lines.
std::vector<std::pair<std::string, std::string>> read_attr_records(const std::filesystem::path& path);

/// Interns several record sets with shared dictionaries and builds one graph per set.
/// Nodes missing from `attrs` get kDefaultAttribute; attribute lines for nodes that appear
/// in none of the sets are ignored and counted in the report.
std::vector<MultiplexGraph> build_graphs(const std::vector<std::vector<EdgeRecord>>& edge_sets,
                                         const std::vector<std::pair<std::string, std::string>>& attrs,
                                         bool directed, LoadReport* report = nullptr);

MultiplexGraph load_graph(const std::filesystem::path& edge_path,
                          const std::optional<std::filesystem::path>& attr_path,
                          const LoadOptions& options, LoadReport* report = nullptr);

/// Writes `src dst layer` lines with original names. Undirected graphs emit one line per edge.
void write_edges(std::ostream& out, const MultiplexGraph& g);
void write_attrs(std::ostream& out, const MultiplexGraph& g);

} // namespace muxrule
