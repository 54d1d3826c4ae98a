#include "hycon/hypergraph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <string>

namespace hycon {

namespace {

std::string describe_components(const std::vector<std::vector<Index>>& comps) {
  std::ostringstream os;
  os << comps.size() << " components:";
  for (const auto& c : comps) {
    os << " {";
    const std::size_t shown = std::min<std::size_t>(c.size(), 8);
    for (std::size_t k = 0; k < shown; ++k) os << (k ? "," : "") << c[k];
    if (c.size() > shown) os << ",... (" << c.size() << " nodes)";
    os << "}";
  }
  return os.str();
}

Index read_index(std::istream& in, const char* what) {
  long long v = 0;
  if (!(in >> v)) throw std::invalid_argument(std::string("failed to read ") + what);
  return static_cast<Index>(v);
}

}  // namespace

// ---------------------------------------------------------------------------
// SimpleGraph

SimpleGraph::SimpleGraph(Index num_nodes, std::vector<Edge> edges)
    : num_nodes_(num_nodes), edges_(std::move(edges)) {
  if (num_nodes_ < 1) throw std::invalid_argument("graph needs at least one node");
  for (auto& [a, b] : edges_) {
    if (a < 0 || b < 0 || a >= num_nodes_ || b >= num_nodes_)
      throw std::invalid_argument("edge endpoint out of range");
    if (a == b) throw std::invalid_argument("self-loop at node " + std::to_string(a));
    if (a > b) std::swap(a, b);
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end())
    throw std::invalid_argument("duplicate edge (" + std::to_string(dup->first) + "," +
                                std::to_string(dup->second) + ")");
  adjacency_.assign(static_cast<std::size_t>(num_nodes_), {});
  for (auto [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

std::vector<std::vector<Index>> SimpleGraph::components() const {
  std::vector<Index> label(static_cast<std::size_t>(num_nodes_), -1);
  std::vector<std::vector<Index>> out;
  for (Index s = 0; s < num_nodes_; ++s) {
    if (label[s] >= 0) continue;
    const Index id = static_cast<Index>(out.size());
    out.emplace_back();
    std::queue<Index> q;
    q.push(s);
    label[s] = id;
    while (!q.empty()) {
      Index v = q.front();
      q.pop();
      out.back().push_back(v);
      for (Index u : adjacency_[v]) {
        if (label[u] < 0) {
          label[u] = id;
          q.push(u);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

Eigen::MatrixXd SimpleGraph::laplacian() const {
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(num_nodes_, num_nodes_);
  for (auto [a, b] : edges_) {
    lap(a, a) += 1.0;
    lap(b, b) += 1.0;
    lap(a, b) -= 1.0;
    lap(b, a) -= 1.0;
  }
  return lap;
}

// ---------------------------------------------------------------------------
// Hypergraph

Hypergraph::Hypergraph(Index num_nodes, std::vector<std::vector<Index>> hyperedges)
    : num_nodes_(num_nodes), hyperedges_(std::move(hyperedges)) {
  if (num_nodes_ < 2) throw std::invalid_argument("hypergraph needs at least two nodes");
  incident_.assign(static_cast<std::size_t>(num_nodes_), {});
  for (std::size_t j = 0; j < hyperedges_.size(); ++j) {
    auto& e = hyperedges_[j];
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end())
      throw std::invalid_argument("hyperedge " + std::to_string(j) + " repeats a node");
    if (e.size() < 2)
      throw std::invalid_argument("hyperedge " + std::to_string(j) +
                                  " has fewer than two nodes");
    for (Index i : e) {
      if (i < 0 || i >= num_nodes_)
        throw std::invalid_argument("hyperedge " + std::to_string(j) + " node out of range");
      incident_[i].push_back(static_cast<Index>(j));
    }
  }
  for (Index i = 0; i < num_nodes_; ++i) {
    if (incident_[i].empty())
      throw std::invalid_argument("node " + std::to_string(i) + " lies in no hyperedge");
  }
}

Index Hypergraph::num_incidences() const {
  Index t = 0;
  for (const auto& e : hyperedges_) t += static_cast<Index>(e.size());
  return t;
}

bool Hypergraph::contains(Index j, Index node) const {
  const auto& e = hyperedges_[j];
  return std::binary_search(e.begin(), e.end(), node);
}

std::vector<std::vector<Index>> components(const Hypergraph& h) {
  const Index n = h.num_nodes();
  std::vector<Index> label(static_cast<std::size_t>(n), -1);
  std::vector<char> edge_seen(static_cast<std::size_t>(h.num_hyperedges()), 0);
  std::vector<std::vector<Index>> out;
  for (Index s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    const Index id = static_cast<Index>(out.size());
    out.emplace_back();
    std::queue<Index> q;
    q.push(s);
    label[s] = id;
    while (!q.empty()) {
      Index v = q.front();
      q.pop();
      out.back().push_back(v);
      for (Index j : h.incident(v)) {
        if (edge_seen[j]) continue;
        edge_seen[j] = 1;
        for (Index u : h.hyperedge(j)) {
          if (label[u] < 0) {
            label[u] = id;
            q.push(u);
          }
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

bool is_connected(const Hypergraph& h) { return components(h).size() == 1; }

Hypergraph from_simple_edges(const SimpleGraph& g) {
  auto comps = g.components();
  if (comps.size() != 1)
    throw std::invalid_argument("graph is disconnected: " + describe_components(comps));
  std::vector<std::vector<Index>> hedges;
  hedges.reserve(g.edges().size());
  for (auto [a, b] : g.edges()) hedges.push_back({a, b});
  return Hypergraph(g.num_nodes(), std::move(hedges));
}

Hypergraph single_hub(Index n) {
  if (n < 2) throw std::invalid_argument("single_hub needs n >= 2");
  std::vector<Index> all(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) all[i] = i;
  return Hypergraph(n, {std::move(all)});
}

ConstraintMatrices constraint_matrices(const Hypergraph& h) {
  const Index t = h.num_incidences();
  ConstraintMatrices cm;
  cm.node_selector = Eigen::MatrixXi::Zero(t, h.num_nodes());
  cm.edge_selector = Eigen::MatrixXi::Zero(t, h.num_hyperedges());
  Index row = 0;
  for (Index j = 0; j < h.num_hyperedges(); ++j) {
    for (Index i : h.hyperedge(j)) {
      cm.node_selector(row, i) = 1;
      cm.edge_selector(row, j) = 1;
      ++row;
    }
  }
  return cm;
}

// ---------------------------------------------------------------------------
// Greedy LFC placement

GreedyCover greedy_lfc_selection(const SimpleGraph& g, Index budget) {
  if (budget < 1) throw std::invalid_argument("LFC budget must be at least 1");
  auto comps = g.components();
  if (comps.size() != 1)
    throw std::invalid_argument("graph is disconnected: " + describe_components(comps));

  const Index n = g.num_nodes();
  std::vector<char> alive(static_cast<std::size_t>(n), 1);
  std::set<Edge> remaining(g.edges().begin(), g.edges().end());
  Index alive_count = n;

  std::vector<std::vector<Index>> hedges;
  HostMap hosts;
  Index selected = 0;

  auto residual_degree = [&](Index v) {
    Index d = 0;
    for (Index u : g.neighbors(v)) d += alive[u] ? 1 : 0;
    return d;
  };

  while (alive_count > 0) {
    Index best = -1;
    Index best_degree = -1;
    for (Index v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      const Index d = residual_degree(v);
      if (d > best_degree) {
        best = v;
        best_degree = d;
      }
    }

    std::vector<Index> members{best};
    for (Index u : g.neighbors(best))
      if (alive[u]) members.push_back(u);
    std::sort(members.begin(), members.end());

    for (Index u : members) alive[u] = 0;
    alive_count -= static_cast<Index>(members.size());
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b)
        remaining.erase({members[a], members[b]});

    // An isolated residual vertex would give a one-node hyperedge; it stays
    // attached through its surviving simple edges instead and uses no budget.
    if (members.size() < 2) continue;

    hedges.push_back(std::move(members));
    hosts.emplace_back(best);
    if (++selected >= budget) break;
  }

  for (auto [a, b] : remaining) {
    hedges.push_back({a, b});
    hosts.emplace_back(std::nullopt);
  }

  Hypergraph h(n, std::move(hedges));
  auto hcomps = components(h);
  if (hcomps.size() != 1)
    throw DisconnectedError("greedy LFC selection produced a disconnected hypergraph: " +
                            describe_components(hcomps));
  return GreedyCover{std::move(h), std::move(hosts), selected};
}

// ---------------------------------------------------------------------------
// Text formats

Hypergraph read_hypergraph(std::istream& in) {
  const Index n = read_index(in, "node count");
  const Index m = read_index(in, "hyperedge count");
  if (m < 0) throw std::invalid_argument("negative hyperedge count");
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<Index>> hedges;
  hedges.reserve(static_cast<std::size_t>(m));
  while (static_cast<Index>(hedges.size()) < m && std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<Index> e;
    long long v;
    while (ls >> v) e.push_back(static_cast<Index>(v));
    if (e.empty()) continue;
    if (!std::is_sorted(e.begin(), e.end()))
      throw std::invalid_argument("hyperedge line is not in ascending order: " + line);
    hedges.push_back(std::move(e));
  }
  if (static_cast<Index>(hedges.size()) != m)
    throw std::invalid_argument("expected " + std::to_string(m) + " hyperedges, read " +
                                std::to_string(hedges.size()));
  return Hypergraph(n, std::move(hedges));
}

void write_hypergraph(std::ostream& out, const Hypergraph& h) {
  out << h.num_nodes() << ' ' << h.num_hyperedges() << '\n';
  for (const auto& e : h.hyperedges()) {
    for (std::size_t k = 0; k < e.size(); ++k) out << (k ? " " : "") << e[k];
    out << '\n';
  }
}

SimpleGraph read_simple_graph(std::istream& in) {
  const Index n = read_index(in, "node count");
  const Index m = read_index(in, "edge count");
  if (m < 0) throw std::invalid_argument("negative edge count");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (Index k = 0; k < m; ++k) {
    const Index a = read_index(in, "edge endpoint");
    const Index b = read_index(in, "edge endpoint");
    if (a >= b) throw std::invalid_argument("edge lines must satisfy i < j");
    edges.emplace_back(a, b);
  }
  return SimpleGraph(n, std::move(edges));
}

void write_simple_graph(std::ostream& out, const SimpleGraph& g) {
  out << g.num_nodes() << ' ' << g.num_edges() << '\n';
  for (auto [a, b] : g.edges()) out << a << ' ' << b << '\n';
}

}  // namespace hycon
