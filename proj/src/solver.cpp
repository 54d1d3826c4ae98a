#include "hycon/solver.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace hycon {

namespace {

void check_shapes(const SolverState& s, const IncidenceAlgebrad& alg, const CostModel& model) {
  const Index n = alg.num_nodes();
  const Index m = alg.num_hyperedges();
  const Index l = model.dim();
  if (model.num_nodes() != n)
    throw std::invalid_argument("cost model and hypergraph disagree on node count");
  if (s.X.rows() != n || s.X.cols() != l || s.Y.rows() != n || s.Y.cols() != l ||
      s.Z.rows() != m || s.Z.cols() != l)
    throw std::invalid_argument("solver state shape does not match problem");
  if (!(s.running_sum.rows() == n && s.running_sum.cols() == l))
    throw std::invalid_argument("solver state running sum has the wrong shape");
}

std::int64_t unhosted_comm(const IncidenceAlgebrad& alg) {
  return 2 * static_cast<std::int64_t>(alg.edge_degrees.sum());
}

// E^-1 C^T X: hyperedge averages.
Eigen::MatrixXd hyperedge_average(const IncidenceAlgebrad& alg, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd z = alg.incidence_sparse.transpose() * x;
  return alg.edge_degrees.cwiseInverse().asDiagonal() * z;
}

Eigen::MatrixXd solve_rows(const CostModel& model, const IncidenceAlgebrad& alg, double rho,
                           const Eigen::MatrixXd& rhs) {
  Eigen::MatrixXd x(rhs.rows(), rhs.cols());
  // Rows are independent; each is a local solve at node i.
  for (Index i = 0; i < rhs.rows(); ++i)
    x.row(i) = model.resolvent(i, rho * alg.node_degrees(i), rhs.row(i).transpose()).transpose();
  return x;
}

}  // namespace

SolverState SolverState::initial(Eigen::MatrixXd x0, Eigen::MatrixXd z0) {
  SolverState s;
  s.Y = Eigen::MatrixXd::Zero(x0.rows(), x0.cols());
  s.running_sum = x0;
  s.X = std::move(x0);
  s.Z = std::move(z0);
  return s;
}

SolverState SolverState::zeros(Index num_nodes, Index num_hyperedges, Index dim) {
  return initial(Eigen::MatrixXd::Zero(num_nodes, dim), Eigen::MatrixXd::Zero(num_hyperedges, dim));
}

std::int64_t comm_cost_per_iter(const Hypergraph& h, const HostMap& hosts) {
  if (!hosts.empty() && static_cast<Index>(hosts.size()) != h.num_hyperedges())
    throw std::invalid_argument("host map must have one entry per hyperedge");
  std::int64_t cost = 0;
  for (Index j = 0; j < h.num_hyperedges(); ++j) {
    Index links = h.edge_degree(j);
    if (!hosts.empty() && hosts[j]) {
      if (!h.contains(j, *hosts[j]))
        throw std::invalid_argument("host " + std::to_string(*hosts[j]) +
                                    " is not incident to hyperedge " + std::to_string(j));
      links -= 1;
    }
    cost += 2 * links;
  }
  return cost;
}

SolverState step(SolverState s, const IncidenceAlgebrad& alg, const CostModel& model, double rho,
                 std::optional<std::int64_t> comm_per_iter) {
  check_shapes(s, alg, model);
  const auto& c = alg.incidence_sparse;
  const Eigen::MatrixXd rhs = rho * (c * s.Z) - s.Y;
  s.X = solve_rows(model, alg, rho, rhs);
  s.Z = hyperedge_average(alg, s.X);
  s.Y += rho * (alg.node_degrees.asDiagonal() * s.X - c * s.Z);
  s.running_sum += s.X;
  s.iter += 1;
  s.comm_cost += comm_per_iter.value_or(unhosted_comm(alg));
  return s;
}

SolverState step_memory(SolverState s, const IncidenceAlgebrad& alg, const CostModel& model,
                        double rho, std::optional<std::int64_t> comm_per_iter) {
  check_shapes(s, alg, model);
  const auto& c = alg.incidence_sparse;
  auto smooth = [&](const Eigen::MatrixXd& v) -> Eigen::MatrixXd { return c * hyperedge_average(alg, v); };
  auto disagreement = [&](const Eigen::MatrixXd& v) -> Eigen::MatrixXd {
    return alg.node_degrees.asDiagonal() * v - smooth(v);
  };

  const Eigen::MatrixXd rhs = rho * smooth(s.X) - rho * disagreement(s.running_sum);
  s.X = solve_rows(model, alg, rho, rhs);
  s.running_sum += s.X;
  s.Z = hyperedge_average(alg, s.X);
  s.Y = rho * disagreement(s.running_sum);
  s.iter += 1;
  s.comm_cost += comm_per_iter.value_or(unhosted_comm(alg));
  return s;
}

double relative_accuracy(const Eigen::MatrixXd& x, const Eigen::VectorXd& x_star) {
  const double err = (x.rowwise() - x_star.transpose()).norm();
  const double scale = x_star.norm();
  return scale > 0 ? err / scale : err;
}

std::string_view to_string(RunStatus s) {
  return s == RunStatus::converged ? "converged" : "max_iters";
}

RunResult run(const Hypergraph& h, const CostModel& model, const SolverConfig& cfg,
              const HostMap& hosts, const GNormProbe& gnorm, std::optional<SolverState> init) {
  if (!(cfg.rho > 0)) throw std::invalid_argument("rho must be positive");
  if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be positive");
  if (!(cfg.tolerance > 0)) throw std::invalid_argument("tolerance must be positive");
  if (model.num_nodes() != h.num_nodes())
    throw std::invalid_argument("cost model and hypergraph disagree on node count");
  if (!is_connected(h)) throw DisconnectedError("hypergraph is disconnected; consensus is unreachable");

  const auto alg = incidence_algebra<double>(h);
  const std::int64_t per_iter = comm_cost_per_iter(h, hosts);

  RunResult result;
  result.x_star = cfg.reference ? *cfg.reference : model.global_minimizer();
  if (result.x_star.size() != model.dim())
    throw std::invalid_argument("reference optimum has the wrong dimension");

  SolverState s = init ? std::move(*init) : SolverState::zeros(h.num_nodes(), h.num_hyperedges(), model.dim());
  check_shapes(s, alg, model);

  auto record = [&](const SolverState& st) {
    TraceRecord r;
    r.iter = st.iter;
    r.rel_accuracy = relative_accuracy(st.X, result.x_star);
    if (gnorm) r.gnorm_sq = gnorm(st);
    r.comm_cost = st.comm_cost;
    result.trace.records.push_back(r);
    if (cfg.record_states) result.states.push_back(st);
  };
  record(s);

  result.trace.status = RunStatus::max_iters;
  for (Index k = 0; k < cfg.max_iters; ++k) {
    Eigen::MatrixXd previous;
    if (cfg.stop == StopRule::successive_difference) previous = s.X;
    s = cfg.variant == Variant::standard ? step(std::move(s), alg, model, cfg.rho, per_iter)
                                         : step_memory(std::move(s), alg, model, cfg.rho, per_iter);
    record(s);
    bool done = false;
    if (cfg.stop == StopRule::relative_accuracy) {
      done = result.trace.records.back().rel_accuracy <= cfg.tolerance;
    } else {
      done = (s.X - previous).norm() / std::max(1.0, previous.norm()) <= cfg.tolerance;
    }
    if (done) {
      result.trace.status = RunStatus::converged;
      break;
    }
  }
  result.final_state = std::move(s);
  return result;
}

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace) {
  out << "iter,rel_accuracy,gnorm_sq,comm_cost\n";
  char buf[64];
  for (const auto& r : trace.records) {
    out << r.iter << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.rel_accuracy);
    out << buf << ',';
    if (r.gnorm_sq) {
      std::snprintf(buf, sizeof buf, "%.17g", *r.gnorm_sq);
      out << buf;
    }
    out << ',' << r.comm_cost << '\n';
  }
}

}  // namespace hycon
