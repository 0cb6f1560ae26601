#pragma once

#include <cstdint>
#include <vector>

#include "muxrule/graph.hpp"

namespace muxrule {

struct SynthConfig {
    /// Node count per layer; layer i spans nodes 1..layer_sizes[i].
    std::vector<std::size_t> layer_sizes{200, 150, 100, 50};
    std::size_t communities = 4;
    /// When non-zero, each layer gets round(n / community_size) communities instead.
    std::size_t community_size = 0;
    double p_in = 0.3;
    double p_out = 0.02;
    std::uint64_t seed = 1;
};

/// Throws UsageError unless sizes are positive and non-increasing, communities >= 1,
/// probabilities lie in [0, 1] and p_in > p_out.
void validate(const SynthConfig& cfg);

/// Undirected planted-partition multiplex graph. Layer i is named "L<i+1>" and its
/// nodes are split into equal communities after a seeded shuffle. Node names are
/// 1-based decimal ids; all nodes carry the default attribute.
MultiplexGraph generate(const SynthConfig& cfg);

/// Growth scenario for old-new prediction: `hubs` of `old_nodes` core nodes have
/// already attracted `followers_per_hub` pendant neighbours in layer "follow"; in the
/// test period `new_nodes` fresh nodes attach in "follow", to a hub with probability
/// hub_bias and to a uniformly random core node otherwise. Core nodes also share a
/// random "social" layer with edge probability p_social. Hubs carry attribute "hub",
/// every other node "member".
struct GrowthConfig {
    std::size_t old_nodes = 100;
    std::size_t hubs = 20;
    std::size_t followers_per_hub = 3;
    std::size_t new_nodes = 60;
    double hub_bias = 0.9;
    double p_social = 0.02;
    std::uint64_t seed = 1;
};

struct GrowthPair {
    MultiplexGraph train;
    MultiplexGraph test; // superset of train, shared dictionaries
};

GrowthPair generate_growth(const GrowthConfig& cfg);

} // namespace muxrule
