#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "hycon/hypergraph.hpp"

namespace hycon {

enum class GraphFamily { line, cycle, star, lollipop, caveman, erdos_renyi };

std::string_view to_string(GraphFamily f);
GraphFamily parse_graph_family(std::string_view name);

/// Parameters of a seeded topology generator. Optional fields must be set
/// exactly when the family uses them:
///   line, cycle, star   num_nodes
///   lollipop            num_nodes, clique_fraction
///   caveman             num_cliques, clique_size
///   erdos_renyi         num_nodes, edge_prob
struct GenSpec {
  GraphFamily family = GraphFamily::line;
  std::optional<Index> num_nodes;
  std::optional<double> edge_prob;
  std::optional<Index> num_cliques;
  std::optional<Index> clique_size;
  std::optional<double> clique_fraction;
  std::uint64_t seed = 0;
};

/// Maximum number of Erdos-Renyi resamples before giving up on connectivity.
inline constexpr int kMaxErAttempts = 1000;

/// Generates a connected simple graph, deterministic in (spec, seed).
///
/// lollipop: nodes [0, k) form a clique with k = round(fraction * N); the
/// path k-1, k, ..., N-1 hangs off clique node k-1.
/// caveman: clique t holds nodes [t*s, (t+1)*s); node t*s links to node
/// (t+1)*s + 1 (mod k*s) to close a ring of cliques.
/// erdos_renyi: each unordered pair (i < j), enumerated lexicographically, is
/// an edge with probability edge_prob; attempt a draws from Rng(seed, a).
SimpleGraph generate(const GenSpec& spec);

}  // namespace hycon
