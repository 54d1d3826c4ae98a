#include <doctest.h>

#include <algorithm>
#include <queue>

#include "hycon/graphgen.hpp"

using namespace hycon;

namespace {

GenSpec spec_of(GraphFamily f, Index n) {
  GenSpec s;
  s.family = f;
  s.num_nodes = n;
  return s;
}

Index eccentricity(const SimpleGraph& g, Index src) {
  std::vector<Index> dist(g.num_nodes(), -1);
  std::queue<Index> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    const Index u = q.front();
    q.pop();
    for (Index v : g.neighbors(u))
      if (dist[v] < 0) dist[v] = dist[u] + 1, q.push(v);
  }
  return *std::max_element(dist.begin(), dist.end());
}

Index diameter(const SimpleGraph& g) {
  Index d = 0;
  for (Index i = 0; i < g.num_nodes(); ++i) d = std::max(d, eccentricity(g, i));
  return d;
}

bool has_edge(const SimpleGraph& g, Index a, Index b) {
  const auto& e = g.edges();
  return std::binary_search(e.begin(), e.end(), Edge{std::min(a, b), std::max(a, b)});
}

}  // namespace

TEST_CASE("family names round trip") {
  for (auto f : {GraphFamily::line, GraphFamily::cycle, GraphFamily::star, GraphFamily::lollipop,
                 GraphFamily::caveman, GraphFamily::erdos_renyi})
    CHECK(parse_graph_family(to_string(f)) == f);
  CHECK_THROWS_AS(parse_graph_family("grid"), std::invalid_argument);
}

TEST_CASE("line, cycle and star") {
  const auto line = generate(spec_of(GraphFamily::line, 5));
  CHECK(line.edges() == std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  CHECK(diameter(generate(spec_of(GraphFamily::line, 30))) == 29);

  const auto cycle = generate(spec_of(GraphFamily::cycle, 6));
  CHECK(cycle.num_edges() == 6);
  for (Index i = 0; i < 6; ++i) CHECK(cycle.degree(i) == 2);

  const auto star = generate(spec_of(GraphFamily::star, 4));
  CHECK(star.edges() == std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}});
  CHECK(diameter(generate(spec_of(GraphFamily::star, 50))) == 2);
}

TEST_CASE("lollipop shares one clique vertex with its path") {
  auto s = spec_of(GraphFamily::lollipop, 50);
  s.clique_fraction = 0.5;
  const auto g = generate(s);
  CHECK(g.num_nodes() == 50);
  for (Index i = 0; i < 25; ++i)
    for (Index j = i + 1; j < 25; ++j) CHECK(has_edge(g, i, j));
  for (Index i = 24; i < 49; ++i) CHECK(has_edge(g, i, i + 1));
  CHECK(g.num_edges() == 25 * 24 / 2 + 25);
  CHECK(g.is_connected());
}

TEST_CASE("caveman ring of cliques") {
  GenSpec s;
  s.family = GraphFamily::caveman;
  s.num_cliques = 10;
  s.clique_size = 5;
  const auto g = generate(s);
  CHECK(g.num_nodes() == 50);
  CHECK(g.num_edges() == 10 * 10 + 10);
  for (Index t = 0; t < 10; ++t) CHECK(has_edge(g, 5 * t, 5 * ((t + 1) % 10) + 1));
  for (Index i = 0; i < 50; ++i) CHECK(g.degree(i) >= 4);
  CHECK(g.is_connected());
}

TEST_CASE("Erdos-Renyi is connected and seeded") {
  auto s = spec_of(GraphFamily::erdos_renyi, 50);
  s.edge_prob = 0.05;
  s.seed = 42;
  const auto a = generate(s);
  const auto b = generate(s);
  CHECK(a.is_connected());
  CHECK(a.edges() == b.edges());
  s.seed = 43;
  CHECK(generate(s).edges() != a.edges());

  s.edge_prob = 1.0;
  CHECK(generate(s).num_edges() == 50 * 49 / 2);

  // Far below the connectivity threshold every attempt fails.
  s.edge_prob = 1e-4;
  CHECK_THROWS_AS(generate(s), std::runtime_error);
}

TEST_CASE("parameters must match the family") {
  auto s = spec_of(GraphFamily::line, 5);
  s.edge_prob = 0.1;
  CHECK_THROWS_AS(generate(s), std::invalid_argument);

  GenSpec missing;
  missing.family = GraphFamily::erdos_renyi;
  missing.num_nodes = 10;
  CHECK_THROWS_AS(generate(missing), std::invalid_argument);

  auto lol = spec_of(GraphFamily::lollipop, 10);
  lol.clique_fraction = 1.0;
  CHECK_THROWS_AS(generate(lol), std::invalid_argument);

  GenSpec cave;
  cave.family = GraphFamily::caveman;
  cave.num_cliques = 3;
  cave.clique_size = 1;
  CHECK_THROWS_AS(generate(cave), std::invalid_argument);

  CHECK_THROWS_AS(generate(spec_of(GraphFamily::cycle, 2)), std::invalid_argument);
  CHECK_THROWS_AS(generate(spec_of(GraphFamily::line, 1)), std::invalid_argument);
}
