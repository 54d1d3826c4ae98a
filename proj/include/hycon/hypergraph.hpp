#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "hycon/errors.hpp"

namespace hycon {

using Index = Eigen::Index;
using Edge = std::pair<Index, Index>;

/// Undirected simple graph. Edges are stored with first < second, sorted.
class SimpleGraph {
 public:
  SimpleGraph(Index num_nodes, std::vector<Edge> edges);

  Index num_nodes() const { return num_nodes_; }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Index>& neighbors(Index i) const { return adjacency_[i]; }
  Index degree(Index i) const { return static_cast<Index>(adjacency_[i].size()); }

  /// Connected components, each an ascending node list, ordered by smallest member.
  std::vector<std::vector<Index>> components() const;
  bool is_connected() const { return components().size() == 1; }

  /// Combinatorial Laplacian diag(deg) - adjacency.
  Eigen::MatrixXd laplacian() const;

 private:
  Index num_nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Index>> adjacency_;
};

/// Hypergraph over nodes [0, num_nodes). Each hyperedge holds at least two
/// distinct nodes in ascending order, and every node lies in some hyperedge.
/// Connectivity is not a construction invariant; query it with is_connected().
class Hypergraph {
 public:
  Hypergraph(Index num_nodes, std::vector<std::vector<Index>> hyperedges);

  Index num_nodes() const { return num_nodes_; }
  Index num_hyperedges() const { return static_cast<Index>(hyperedges_.size()); }
  const std::vector<std::vector<Index>>& hyperedges() const { return hyperedges_; }
  const std::vector<Index>& hyperedge(Index j) const { return hyperedges_[j]; }
  /// Hyperedges incident to node i, ascending.
  const std::vector<Index>& incident(Index i) const { return incident_[i]; }

  Index node_degree(Index i) const { return static_cast<Index>(incident_[i].size()); }
  Index edge_degree(Index j) const { return static_cast<Index>(hyperedges_[j].size()); }
  /// Number of node-hyperedge incidences, i.e. the number of consensus constraints.
  Index num_incidences() const;

  bool contains(Index j, Index node) const;

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

 private:
  Index num_nodes_;
  std::vector<std::vector<Index>> hyperedges_;
  std::vector<std::vector<Index>> incident_;
};

/// Hosting node per hyperedge. A hosted hyperedge is a virtual fusion center
/// living on one of its own members.
using HostMap = std::vector<std::optional<Index>>;

/// Components of the bipartite node-hyperedge graph, as node lists.
std::vector<std::vector<Index>> components(const Hypergraph& h);
bool is_connected(const Hypergraph& h);

/// One two-node hyperedge per simple edge (the fully decentralized topology).
Hypergraph from_simple_edges(const SimpleGraph& g);

/// One hyperedge over all n nodes (a single global fusion center).
Hypergraph single_hub(Index n);

/// Incidence structure of a hypergraph, dense and templated on the scalar.
///
///   incidence       C, N x M, C(i, j) = 1 iff node i lies in hyperedge j
///   node_degrees    diagonal of D
///   edge_degrees    diagonal of E
///   averaging       S = C E^-1 C^T
///   half_laplacian  D - S (the hypergraph Laplacian is twice this)
template <typename Scalar>
struct IncidenceAlgebra {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Sparse = Eigen::SparseMatrix<Scalar>;

  Matrix incidence;
  Sparse incidence_sparse;
  Vector node_degrees;
  Vector edge_degrees;
  Matrix averaging;
  Matrix half_laplacian;

  Index num_nodes() const { return incidence.rows(); }
  Index num_hyperedges() const { return incidence.cols(); }
  Matrix node_degree_matrix() const { return node_degrees.asDiagonal(); }
  Matrix edge_degree_matrix() const { return edge_degrees.asDiagonal(); }
};

using IncidenceAlgebrad = IncidenceAlgebra<double>;

template <typename Scalar = double>
IncidenceAlgebra<Scalar> incidence_algebra(const Hypergraph& h) {
  using Alg = IncidenceAlgebra<Scalar>;
  const Index n = h.num_nodes();
  const Index m = h.num_hyperedges();
  Alg alg;
  alg.incidence = Alg::Matrix::Zero(n, m);
  alg.node_degrees = Alg::Vector::Zero(n);
  alg.edge_degrees = Alg::Vector::Zero(m);
  std::vector<Eigen::Triplet<Scalar>> triplets;
  triplets.reserve(static_cast<std::size_t>(h.num_incidences()));
  for (Index j = 0; j < m; ++j) {
    for (Index i : h.hyperedge(j)) {
      alg.incidence(i, j) = Scalar(1);
      triplets.emplace_back(i, j, Scalar(1));
    }
    alg.edge_degrees(j) = static_cast<Scalar>(h.edge_degree(j));
  }
  for (Index i = 0; i < n; ++i) alg.node_degrees(i) = static_cast<Scalar>(h.node_degree(i));
  alg.incidence_sparse.resize(n, m);
  alg.incidence_sparse.setFromTriplets(triplets.begin(), triplets.end());

  alg.averaging = alg.incidence * alg.edge_degrees.cwiseInverse().asDiagonal() *
                  alg.incidence.transpose();
  alg.half_laplacian = -alg.averaging;
  alg.half_laplacian.diagonal() += alg.node_degrees;
  return alg;
}

/// Constraint coefficient matrices of the incidence-constrained problem
/// A x - B z = 0: one row per (node, hyperedge) incidence. Rows are ordered by
/// hyperedge, then by node. Only used to cross-check the incidence algebra.
struct ConstraintMatrices {
  Eigen::MatrixXi node_selector;  // T x N
  Eigen::MatrixXi edge_selector;  // T x M
};

ConstraintMatrices constraint_matrices(const Hypergraph& h);

/// Result of greedy fusion-center placement. The first num_lfcs hyperedges
/// are the selected LFCs, each hosted at its selecting vertex; the rest are
/// surviving simple edges with no host. hosts has one entry per hyperedge.
struct GreedyCover {
  Hypergraph hypergraph;
  HostMap hosts;
  Index num_lfcs = 0;
};

/// Greedy selection of local fusion centers.
///
/// Repeatedly picks the remaining vertex of largest degree in the residual
/// graph (ties: lowest index), emits the hyperedge {v} plus its residual
/// neighbors, removes those vertices and every edge internal to that set,
/// and stops after `budget` selections or when no vertex remains. Edges not
/// removed are appended as two-node hyperedges in lexicographic order.
///
/// Throws std::invalid_argument for budget < 1 or a disconnected input, and
/// DisconnectedError when the resulting hypergraph is disconnected.
GreedyCover greedy_lfc_selection(const SimpleGraph& g, Index budget);

// Text formats. Hypergraph: "N M" then M lines of ascending node indices.
// Simple graph: "N M" then M lines "i j" with i < j. Indices are 0-based.
Hypergraph read_hypergraph(std::istream& in);
void write_hypergraph(std::ostream& out, const Hypergraph& h);
SimpleGraph read_simple_graph(std::istream& in);
void write_simple_graph(std::ostream& out, const SimpleGraph& g);

}  // namespace hycon
