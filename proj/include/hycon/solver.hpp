#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "hycon/costs.hpp"
#include "hycon/hypergraph.hpp"

namespace hycon {

enum class Variant {
  standard,  // x -> z -> y updates
  memory,    // x-update from the running sum of past iterates, no explicit dual
};

enum class StopRule {
  relative_accuracy,     // ||X - 1 x*^T||_F / ||x*|| <= tolerance
  successive_difference  // ||X^{k+1} - X^k||_F / max(1, ||X^k||_F) <= tolerance
};

struct SolverConfig {
  double rho = 1.0;
  Index max_iters = 1000;
  double tolerance = 1e-8;
  Variant variant = Variant::standard;
  StopRule stop = StopRule::relative_accuracy;
  /// Consensus optimum; computed with CostModel::global_minimizer when unset.
  std::optional<Eigen::VectorXd> reference;
  /// Keep every state (iteration 0 included) in RunResult::states.
  bool record_states = false;
};

/// Iterates of the hybrid consensus ADMM, one row per node (X, Y) or per
/// hyperedge (Z). running_sum holds X^0 + ... + X^k for the memory form.
struct SolverState {
  Eigen::MatrixXd X;
  Eigen::MatrixXd Z;
  Eigen::MatrixXd Y;
  Eigen::MatrixXd running_sum;
  Index iter = 0;
  std::int64_t comm_cost = 0;

  /// X = X0, Z = Z0, Y = 0, running_sum = X0.
  static SolverState initial(Eigen::MatrixXd x0, Eigen::MatrixXd z0);
  static SolverState zeros(Index num_nodes, Index num_hyperedges, Index dim);
};

/// Transfers per iteration: every node-hyperedge incidence moves one vector
/// each way (node -> FC after the x-update, FC -> node after the z-update).
/// A hosted FC talks to its host for free.
std::int64_t comm_cost_per_iter(const Hypergraph& h, const HostMap& hosts = {});

/// One round of the standard form:
///   X+ row i solves grad f_i(x) + rho d_i x = (rho C Z - Y)_i
///   Z+ = E^-1 C^T X+
///   Y+ = Y + rho (D X+ - C Z+)
/// comm_per_iter defaults to the unhosted count 2 sum_j e_j.
SolverState step(SolverState s, const IncidenceAlgebrad& alg, const CostModel& model, double rho,
                 std::optional<std::int64_t> comm_per_iter = std::nullopt);

/// One round of the memory form:
///   grad F(X+) + rho D X+ = rho S X - rho (D - S) running_sum
/// then running_sum += X+. Z and Y are reconstructed as E^-1 C^T X+ and
/// rho (D - S) running_sum so the state stays comparable with step().
/// Equivalent to step() from the zero initial state.
SolverState step_memory(SolverState s, const IncidenceAlgebrad& alg, const CostModel& model,
                        double rho, std::optional<std::int64_t> comm_per_iter = std::nullopt);

/// ||X - 1 x*^T||_F / ||x*|| (absolute error when x* = 0).
double relative_accuracy(const Eigen::MatrixXd& x, const Eigen::VectorXd& x_star);

enum class RunStatus { converged, max_iters };
std::string_view to_string(RunStatus s);

struct TraceRecord {
  Index iter = 0;
  double rel_accuracy = 0.0;
  std::optional<double> gnorm_sq;
  std::int64_t comm_cost = 0;
};

struct ConvergenceTrace {
  std::vector<TraceRecord> records;  // iteration 0 first
  RunStatus status = RunStatus::max_iters;

  /// Rounds performed until the stop rule fired (or max_iters).
  Index iterations() const { return records.empty() ? 0 : records.back().iter; }
  double final_rel_accuracy() const { return records.empty() ? 0.0 : records.back().rel_accuracy; }
  std::int64_t total_comm_cost() const { return records.empty() ? 0 : records.back().comm_cost; }
};

struct RunResult {
  ConvergenceTrace trace;
  SolverState final_state;
  Eigen::VectorXd x_star;
  std::vector<SolverState> states;  // filled when SolverConfig::record_states
};

/// Optional per-iteration squared G-norm distance, recorded into the trace.
using GNormProbe = std::function<double(const SolverState&)>;

/// Runs from X0 = Z0 = Y0 = 0 (or `init`) until the stop rule or max_iters.
/// Throws DisconnectedError for a disconnected hypergraph.
RunResult run(const Hypergraph& h, const CostModel& model, const SolverConfig& cfg,
              const HostMap& hosts = {}, const GNormProbe& gnorm = {},
              std::optional<SolverState> init = std::nullopt);

/// CSV with header iter,rel_accuracy,gnorm_sq,comm_cost; 17 significant digits.
void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace);

}  // namespace hycon
