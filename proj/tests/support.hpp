#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hycon/hypergraph.hpp"
#include "hycon/random.hpp"

namespace testing {

using hycon::Index;

// Connected random hypergraph on n nodes: a random tree of hyperedges over a
// shuffled node order, then a few extra random hyperedges.
inline hycon::Hypergraph random_hypergraph(hycon::Rng& rng, Index n) {
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[i] = i;
  for (Index i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i + 1))]);

  std::vector<std::vector<Index>> edges;
  Index covered = 1;
  while (covered < n) {
    const Index fresh = std::min<Index>(n - covered, 1 + static_cast<Index>(rng.below(3)));
    std::vector<Index> e{order[rng.below(static_cast<std::uint64_t>(covered))]};
    for (Index k = 0; k < fresh; ++k) e.push_back(order[covered + k]);
    covered += fresh;
    edges.push_back(std::move(e));
  }
  const Index extra = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
  for (Index k = 0; k < extra; ++k) {
    const Index size = 2 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(std::min<Index>(n - 1, 5))));
    auto picked = rng.sample_without_replacement(n, size);
    edges.emplace_back(picked.begin(), picked.end());
  }
  return hycon::Hypergraph(n, std::move(edges));
}

// Connected random simple graph: random tree plus extra edges.
inline hycon::SimpleGraph random_simple_graph(hycon::Rng& rng, Index n, double extra_prob) {
  std::set<hycon::Edge> edges;
  for (Index i = 1; i < n; ++i) edges.insert({static_cast<Index>(rng.below(static_cast<std::uint64_t>(i))), i});
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (rng.uniform() < extra_prob) edges.insert({i, j});
  return hycon::SimpleGraph(n, {edges.begin(), edges.end()});
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hycon_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
