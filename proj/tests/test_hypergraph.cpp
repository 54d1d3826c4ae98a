#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <map>
#include <set>
#include <sstream>

#include "hycon/hypergraph.hpp"
#include "support.hpp"

using namespace hycon;

namespace {

// 6 nodes, 5 edges; its hybrid cover is [{0,1,2,3},{3,4},{4,5}].
SimpleGraph example_graph() { return SimpleGraph(6, {{0, 3}, {1, 3}, {2, 3}, {3, 4}, {4, 5}}); }
Hypergraph example_hybrid() { return Hypergraph(6, {{0, 1, 2, 3}, {3, 4}, {4, 5}}); }

SimpleGraph path(Index n) {
  std::vector<Edge> e;
  for (Index i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return SimpleGraph(n, e);
}

// Straightforward Algorithm-2 re-execution: adjacency sets, degrees recomputed
// from scratch every round.
std::vector<std::vector<Index>> naive_greedy(const SimpleGraph& g, Index budget) {
  const Index n = g.num_nodes();
  std::set<Edge> edges(g.edges().begin(), g.edges().end());
  std::vector<bool> alive(n, true);
  std::vector<std::vector<Index>> out;
  for (Index round = 0; round < budget;) {
    Index best = -1, best_deg = -1;
    for (Index v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      Index d = 0;
      for (const auto& [a, b] : edges)
        if ((a == v && alive[b]) || (b == v && alive[a])) ++d;
      if (d > best_deg) best = v, best_deg = d;
    }
    if (best < 0) break;
    std::set<Index> group{best};
    for (const auto& [a, b] : edges) {
      if (a == best && alive[b]) group.insert(b);
      if (b == best && alive[a]) group.insert(a);
    }
    for (Index v : group) alive[v] = false;
    for (auto it = edges.begin(); it != edges.end();)
      it = (group.count(it->first) && group.count(it->second)) ? edges.erase(it) : std::next(it);
    if (group.size() >= 2) {
      out.emplace_back(group.begin(), group.end());
      ++round;
    }
  }
  for (const auto& [a, b] : edges) out.push_back({a, b});
  return out;
}

}  // namespace

TEST_CASE("simple graph validation") {
  CHECK_THROWS_AS(SimpleGraph(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(SimpleGraph(3, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(SimpleGraph(3, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(SimpleGraph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  SimpleGraph g(4, {{2, 1}, {0, 1}});
  CHECK(g.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
  CHECK(g.degree(1) == 2);
  CHECK_FALSE(g.is_connected());
  CHECK(g.components().size() == 2);
  const Eigen::MatrixXd lap = g.laplacian();
  CHECK(lap(1, 1) == 2);
  CHECK(lap(0, 1) == -1);
  CHECK(lap.rowwise().sum().cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("hypergraph validation") {
  CHECK_THROWS_AS(Hypergraph(1, {}), std::invalid_argument);
  CHECK_THROWS_AS(Hypergraph(3, {{0}}), std::invalid_argument);
  CHECK_THROWS_AS(Hypergraph(3, {{0, 0, 1}, {1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(Hypergraph(3, {{0, 5}}), std::invalid_argument);
  CHECK_THROWS_AS(Hypergraph(3, {{0, 1}}), std::invalid_argument);  // node 2 uncovered
  Hypergraph h(4, {{3, 1, 0}, {2, 3}});
  CHECK(h.hyperedge(0) == std::vector<Index>{0, 1, 3});
  CHECK(h.incident(3) == std::vector<Index>{0, 1});
  CHECK(h.node_degree(3) == 2);
  CHECK(h.edge_degree(0) == 3);
  CHECK(h.num_incidences() == 5);
  CHECK(h.contains(1, 2));
  CHECK_FALSE(h.contains(1, 0));
  CHECK(is_connected(h));
  CHECK_FALSE(is_connected(Hypergraph(4, {{0, 1}, {2, 3}})));
  CHECK(components(Hypergraph(4, {{0, 1}, {2, 3}})) ==
        std::vector<std::vector<Index>>{{0, 1}, {2, 3}});
}

TEST_CASE("specialization constructors") {
  CHECK(from_simple_edges(path(3)).hyperedges() == std::vector<std::vector<Index>>{{0, 1}, {1, 2}});
  CHECK(from_simple_edges(example_graph()).num_hyperedges() == 5);
  CHECK_THROWS_AS(from_simple_edges(SimpleGraph(4, {{0, 1}, {2, 3}})), std::invalid_argument);

  const auto single = incidence_algebra(from_simple_edges(SimpleGraph(2, {{0, 1}})));
  CHECK(single.edge_degrees(0) == 2);

  CHECK_THROWS_AS(single_hub(1), std::invalid_argument);
  CHECK(single_hub(2).hyperedges() == std::vector<std::vector<Index>>{{0, 1}});
  CHECK(single_hub(50).edge_degree(0) == 50);
  const auto hub = incidence_algebra(single_hub(3));
  CHECK(hub.node_degrees == Eigen::VectorXd::Ones(3));
  CHECK(hub.edge_degrees(0) == 3);
  CHECK((hub.averaging - Eigen::MatrixXd::Constant(3, 3, 1.0 / 3)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("incidence algebra on the example hypergraph") {
  const auto alg = incidence_algebra(example_hybrid());
  CHECK(alg.node_degrees == (Eigen::VectorXd(6) << 1, 1, 1, 2, 2, 1).finished());
  CHECK(alg.edge_degrees == (Eigen::VectorXd(3) << 4, 2, 2).finished());
  CHECK(alg.incidence.rowwise().sum() == alg.node_degrees);
  CHECK(alg.incidence.colwise().sum().transpose() == alg.edge_degrees);
  CHECK(Eigen::MatrixXd(alg.incidence_sparse) == alg.incidence);
  // Dual update at node index 3: rho (2 x_3 - 1/4 sum_{i<=3} x_i - 1/2 (x_3 + x_4)).
  Eigen::RowVectorXd expected = Eigen::RowVectorXd::Zero(6);
  expected(3) = 2;
  expected.head(4).array() -= 0.25;
  expected(3) -= 0.5;
  expected(4) -= 0.5;
  CHECK((alg.half_laplacian.row(3) - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("per-edge hypergraph gives half the graph Laplacian") {
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const auto g = testing::random_simple_graph(rng, 12, 0.2);
    const auto alg = incidence_algebra(from_simple_edges(g));
    CHECK((alg.half_laplacian - 0.5 * g.laplacian()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("constraint matrices reproduce the degree products") {
  const auto check = [](const Hypergraph& h) {
    // Brute-force row enumeration independent of the library.
    std::vector<std::pair<Index, Index>> rows;
    for (Index j = 0; j < h.num_hyperedges(); ++j)
      for (Index i : h.hyperedge(j)) rows.push_back({i, j});
    Eigen::MatrixXi a = Eigen::MatrixXi::Zero(rows.size(), h.num_nodes());
    Eigen::MatrixXi b = Eigen::MatrixXi::Zero(rows.size(), h.num_hyperedges());
    for (std::size_t t = 0; t < rows.size(); ++t) a(t, rows[t].first) = b(t, rows[t].second) = 1;

    const auto cm = constraint_matrices(h);
    CHECK(cm.node_selector == a);
    CHECK(cm.edge_selector == b);
    const auto alg = incidence_algebra(h);
    CHECK((a.transpose() * a).cast<double>() == Eigen::MatrixXd(alg.node_degrees.asDiagonal()));
    CHECK((b.transpose() * b).cast<double>() == Eigen::MatrixXd(alg.edge_degrees.asDiagonal()));
    CHECK((a.transpose() * b).cast<double>() == alg.incidence);
  };
  check(Hypergraph(2, {{0, 1}}));
  check(single_hub(3));
  const auto ex = constraint_matrices(example_hybrid());
  CHECK(ex.node_selector.rows() == 8);
  check(example_hybrid());
  Rng rng(11);
  for (int t = 0; t < 20; ++t) check(testing::random_hypergraph(rng, 2 + static_cast<Index>(rng.below(15))));
}

TEST_CASE("averaging and half Laplacian are PSD with the consensus null space") {
  Rng rng(3);
  for (int t = 0; t < 25; ++t) {
    const auto alg = incidence_algebra(testing::random_hypergraph(rng, 2 + static_cast<Index>(rng.below(20))));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(alg.averaging), el(alg.half_laplacian);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    CHECK(el.eigenvalues().minCoeff() >= -1e-10);
    CHECK((alg.half_laplacian * Eigen::VectorXd::Ones(alg.num_nodes())).cwiseAbs().maxCoeff() <= 1e-12);
    // Connected: exactly one zero eigenvalue.
    CHECK(el.eigenvalues()(1) > 1e-9);
  }
}

TEST_CASE("incidence algebra is templated on the scalar") {
  const auto f = incidence_algebra<float>(example_hybrid());
  const auto d = incidence_algebra<double>(example_hybrid());
  CHECK((f.averaging.cast<double>() - d.averaging).cwiseAbs().maxCoeff() < 1e-6);
  const auto ld = incidence_algebra<long double>(example_hybrid());
  CHECK(static_cast<double>((ld.half_laplacian.cast<double>() - d.half_laplacian).cwiseAbs().maxCoeff()) < 1e-15);
}

TEST_CASE("greedy selection: worked cases") {
  SUBCASE("star: the hub covers everything") {
    std::vector<Edge> e;
    for (Index i = 1; i < 8; ++i) e.push_back({0, i});
    const auto cover = greedy_lfc_selection(SimpleGraph(8, e), 1);
    REQUIRE(cover.hypergraph.num_hyperedges() == 1);
    CHECK(cover.hypergraph.edge_degree(0) == 8);
    CHECK(cover.hosts == HostMap{0});
    CHECK(cover.num_lfcs == 1);
  }
  SUBCASE("path of five, budget 1") {
    const auto cover = greedy_lfc_selection(path(5), 1);
    // Vertex 1 wins the tie; the edge (2, 3) touches the group but is not
    // internal to it, so it survives alongside (3, 4).
    CHECK(cover.hypergraph.hyperedges() == std::vector<std::vector<Index>>{{0, 1, 2}, {2, 3}, {3, 4}});
    CHECK(cover.hosts == HostMap{1, std::nullopt, std::nullopt});
  }
  SUBCASE("path of five, large budget") {
    const auto cover = greedy_lfc_selection(path(5), 10);
    CHECK(cover.hypergraph.hyperedges() == std::vector<std::vector<Index>>{{0, 1, 2}, {3, 4}, {2, 3}});
    CHECK(cover.num_lfcs == 2);
    CHECK(cover.hosts == HostMap{1, 3, std::nullopt});
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(greedy_lfc_selection(path(4), 0), std::invalid_argument);
    CHECK_THROWS_AS(greedy_lfc_selection(SimpleGraph(4, {{0, 1}, {2, 3}}), 1), std::invalid_argument);
  }
}

TEST_CASE("greedy selection matches a naive re-execution") {
  Rng rng(17);
  for (int t = 0; t < 40; ++t) {
    const Index n = 3 + static_cast<Index>(rng.below(25));
    const auto g = testing::random_simple_graph(rng, n, rng.uniform() * 0.3);
    const Index budget = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    const auto expected = naive_greedy(g, budget);
    try {
      const auto cover = greedy_lfc_selection(g, budget);
      CHECK(cover.hypergraph.hyperedges() == expected);
      for (Index j = 0; j < cover.num_lfcs; ++j) {
        REQUIRE(cover.hosts[j]);
        CHECK(cover.hypergraph.contains(j, *cover.hosts[j]));
      }
      for (Index j = cover.num_lfcs; j < cover.hypergraph.num_hyperedges(); ++j) CHECK_FALSE(cover.hosts[j]);
    } catch (const DisconnectedError&) {
      // Legitimate only if the naive cover is disconnected as well.
      std::set<Index> covered;
      for (const auto& e : expected) covered.insert(e.begin(), e.end());
      const bool full = static_cast<Index>(covered.size()) == n;
      CHECK((!full || !is_connected(Hypergraph(n, expected))));
    }
  }
}

TEST_CASE("greedy budgets saturate") {
  const auto g = path(20);
  const auto a = greedy_lfc_selection(g, 7);
  const auto b = greedy_lfc_selection(g, 40);
  const auto c = greedy_lfc_selection(g, 41);
  CHECK(b.hypergraph == c.hypergraph);
  CHECK(a.num_lfcs == 7);
  CHECK(b.num_lfcs >= a.num_lfcs);
}

TEST_CASE("text round trips") {
  const auto h = example_hybrid();
  std::stringstream ss;
  write_hypergraph(ss, h);
  CHECK(read_hypergraph(ss) == h);

  const auto g = example_graph();
  std::stringstream gs;
  write_simple_graph(gs, g);
  const auto back = read_simple_graph(gs);
  CHECK(back.edges() == g.edges());
  CHECK(back.num_nodes() == g.num_nodes());

  std::stringstream bad("3 2\n0 1\n");
  CHECK_THROWS(read_hypergraph(bad));
}
