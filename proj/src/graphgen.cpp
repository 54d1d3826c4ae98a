#include "hycon/graphgen.hpp"

#include <cmath>
#include <stdexcept>

#include "hycon/random.hpp"

namespace hycon {

namespace {

template <typename T>
T require(const std::optional<T>& v, const char* field, GraphFamily f) {
  if (!v)
    throw std::invalid_argument(std::string(field) + " is required for family " +
                                std::string(to_string(f)));
  return *v;
}

template <typename T>
void forbid(const std::optional<T>& v, const char* field, GraphFamily f) {
  if (v)
    throw std::invalid_argument(std::string(field) + " is not used by family " +
                                std::string(to_string(f)));
}

void add_clique(std::vector<Edge>& edges, Index first, Index size) {
  for (Index a = first; a < first + size; ++a)
    for (Index b = a + 1; b < first + size; ++b) edges.emplace_back(a, b);
}

SimpleGraph erdos_renyi(Index n, double p, std::uint64_t seed) {
  for (int attempt = 0; attempt < kMaxErAttempts; ++attempt) {
    Rng rng(seed, static_cast<std::uint64_t>(attempt));
    std::vector<Edge> edges;
    for (Index a = 0; a < n; ++a)
      for (Index b = a + 1; b < n; ++b)
        if (rng.uniform() < p) edges.emplace_back(a, b);
    SimpleGraph g(n, std::move(edges));
    if (g.is_connected()) return g;
  }
  throw std::runtime_error("Erdos-Renyi graph not connected after " +
                           std::to_string(kMaxErAttempts) + " attempts");
}

}  // namespace

std::string_view to_string(GraphFamily f) {
  switch (f) {
    case GraphFamily::line: return "line";
    case GraphFamily::cycle: return "cycle";
    case GraphFamily::star: return "star";
    case GraphFamily::lollipop: return "lollipop";
    case GraphFamily::caveman: return "caveman";
    case GraphFamily::erdos_renyi: return "erdos_renyi";
  }
  return "unknown";
}

GraphFamily parse_graph_family(std::string_view name) {
  for (auto f : {GraphFamily::line, GraphFamily::cycle, GraphFamily::star,
                 GraphFamily::lollipop, GraphFamily::caveman, GraphFamily::erdos_renyi})
    if (to_string(f) == name) return f;
  throw std::invalid_argument("unknown graph family: " + std::string(name));
}

SimpleGraph generate(const GenSpec& spec) {
  const GraphFamily f = spec.family;
  std::vector<Edge> edges;

  if (f != GraphFamily::erdos_renyi) forbid(spec.edge_prob, "edge_prob", f);
  if (f != GraphFamily::lollipop) forbid(spec.clique_fraction, "clique_fraction", f);
  if (f != GraphFamily::caveman) {
    forbid(spec.num_cliques, "num_cliques", f);
    forbid(spec.clique_size, "clique_size", f);
  }

  switch (f) {
    case GraphFamily::line: {
      const Index n = require(spec.num_nodes, "num_nodes", f);
      if (n < 2) throw std::invalid_argument("line needs at least 2 nodes");
      for (Index i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      return SimpleGraph(n, std::move(edges));
    }
    case GraphFamily::cycle: {
      const Index n = require(spec.num_nodes, "num_nodes", f);
      if (n < 3) throw std::invalid_argument("cycle needs at least 3 nodes");
      for (Index i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      edges.emplace_back(0, n - 1);
      return SimpleGraph(n, std::move(edges));
    }
    case GraphFamily::star: {
      const Index n = require(spec.num_nodes, "num_nodes", f);
      if (n < 2) throw std::invalid_argument("star needs at least 2 nodes");
      for (Index i = 1; i < n; ++i) edges.emplace_back(0, i);
      return SimpleGraph(n, std::move(edges));
    }
    case GraphFamily::lollipop: {
      const Index n = require(spec.num_nodes, "num_nodes", f);
      const double frac = require(spec.clique_fraction, "clique_fraction", f);
      if (!(frac > 0.0 && frac < 1.0))
        throw std::invalid_argument("clique_fraction must lie in (0, 1)");
      const auto k = static_cast<Index>(std::llround(frac * static_cast<double>(n)));
      if (k < 2 || k > n) throw std::invalid_argument("lollipop clique size out of range");
      add_clique(edges, 0, k);
      for (Index i = k - 1; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      return SimpleGraph(n, std::move(edges));
    }
    case GraphFamily::caveman: {
      const Index k = require(spec.num_cliques, "num_cliques", f);
      const Index s = require(spec.clique_size, "clique_size", f);
      if (k < 1 || s < 2) throw std::invalid_argument("caveman needs num_cliques >= 1, clique_size >= 2");
      if (spec.num_nodes && *spec.num_nodes != k * s)
        throw std::invalid_argument("caveman num_nodes must equal num_cliques * clique_size");
      for (Index t = 0; t < k; ++t) add_clique(edges, t * s, s);
      if (k >= 2) {
        for (Index t = 0; t < k; ++t) {
          const Index from = t * s;
          const Index to = ((t + 1) % k) * s + 1;
          edges.emplace_back(std::min(from, to), std::max(from, to));
        }
      }
      return SimpleGraph(k * s, std::move(edges));
    }
    case GraphFamily::erdos_renyi: {
      const Index n = require(spec.num_nodes, "num_nodes", f);
      const double p = require(spec.edge_prob, "edge_prob", f);
      if (n < 2) throw std::invalid_argument("erdos_renyi needs at least 2 nodes");
      if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("edge_prob must lie in (0, 1]");
      return erdos_renyi(n, p, spec.seed);
    }
  }
  throw std::invalid_argument("unhandled graph family");
}

}  // namespace hycon
