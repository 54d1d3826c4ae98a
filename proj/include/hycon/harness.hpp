#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hycon/analysis.hpp"
#include "hycon/costs.hpp"
#include "hycon/graphgen.hpp"
#include "hycon/hypergraph.hpp"
#include "hycon/solver.hpp"

namespace hycon {

/// How fusion centers are laid over a simple graph.
struct Method {
  enum class Kind { centralized, decentralized, hybrid_dedicated, hybrid_greedy };
  Kind kind = Kind::decentralized;
  double fraction = 0.0;  // hybrid_dedicated
  Index budget = 0;       // hybrid_greedy

  static Method centralized() { return {Kind::centralized}; }
  static Method decentralized() { return {Kind::decentralized}; }
  static Method dedicated(double fraction) { return {Kind::hybrid_dedicated, fraction, 0}; }
  static Method greedy(Index budget) { return {Kind::hybrid_greedy, 0.0, budget}; }

  /// Accepts "centralized", "decentralized", "hybrid_dedicated:<p>",
  /// "hybrid_greedy:<B>" and the label forms with '_' in place of ':'.
  static Method parse(std::string_view text);

  /// File-name-safe name, e.g. hybrid_dedicated_0.5 or hybrid_greedy_8.
  std::string label() const;
};

struct MethodTopology {
  Hypergraph hypergraph;
  HostMap hosts;  // one entry per hyperedge
};

/// centralized: one hub over all nodes, edges ignored.
/// decentralized: one hyperedge per edge.
/// hybrid_dedicated(p): per-edge hyperedges plus one unhosted hyperedge over
/// ceil(pN) nodes drawn uniformly without replacement from `seed`.
/// hybrid_greedy(B): greedy_lfc_selection(g, B), LFCs hosted.
MethodTopology build_method_hypergraph(const SimpleGraph& g, const Method& method,
                                       std::uint64_t seed);

/// 17 points log-spaced over [1e-2, 1e2].
std::vector<double> default_rho_grid();

/// Parallel runs are capped by HYCON_THREADS when set, else by the hardware.
unsigned worker_count();

struct GridPoint {
  double rho = 0.0;
  Index iterations = 0;
  RunStatus status = RunStatus::max_iters;
  double final_rel_accuracy = 0.0;
};

struct GridSearchResult {
  double best_rho = 0.0;
  bool all_failed = false;      // no rho reached tolerance; best_rho is the accuracy argmin
  std::vector<GridPoint> runs;  // sorted by rho
};

/// One consensus problem instance: topology, costs and stopping rule.
/// `solver.reference` should hold x* so it is not recomputed per run.
struct Problem {
  Hypergraph hypergraph;
  HostMap hosts;
  CostModel model;
  SolverConfig solver;
};

/// Runs every rho to tolerance or max_iters and keeps the fewest iterations,
/// ties to the smaller rho.
GridSearchResult rho_grid_search(const Problem& problem, std::vector<double> grid);

struct CostSpec {
  double x0 = 1.0;
  double noise_var = 0.1;
  Index dim = 1;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> observations_csv;
};

struct ExperimentConfig {
  GenSpec graph;
  std::optional<std::filesystem::path> graph_file;  // replaces the generator
  std::vector<Method> methods;
  CostSpec cost;
  std::vector<double> rho;  // one value is used as is; more are grid-searched
  double tolerance = 1e-8;
  Index max_iters = 20000;
  std::vector<Index> budgets;
  std::uint64_t fc_seed = 0;
  Variant variant = Variant::standard;
};

/// Flat JSON. Keys: family, num_nodes, edge_prob, num_cliques, clique_size,
/// clique_fraction, graph_seed, graph_file, method | methods, x0, noise_var,
/// dim, cost_seed, observations_csv, rho (number, list or "grid"), tolerance,
/// max_iters, budgets, fc_seed, variant. Unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

SimpleGraph load_graph(const ExperimentConfig& cfg);
CostModel load_costs(const ExperimentConfig& cfg, Index num_nodes);

struct MethodReport {
  std::string method;
  double rho = 0.0;
  Index iterations = 0;
  std::int64_t comm_cost = 0;
  double final_rel_accuracy = 0.0;
  RunStatus status = RunStatus::max_iters;
  RateProfile rate_profile;
  Eigen::RowVectorXd consensus;  // mean of the final local iterates
  ConvergenceTrace trace;
};

struct ComparisonReport {
  Eigen::VectorXd x_star;
  std::vector<MethodReport> methods;
};

/// For each method: build the topology, pick rho, solve, and write
/// trace_<label>.csv. Writes report.json when out_dir is set.
ComparisonReport run_comparison(const ExperimentConfig& cfg,
                                const std::optional<std::filesystem::path>& out_dir);

struct SweepRow {
  Index budget = 0;
  double rho = 0.0;
  Index iterations = 0;
  std::int64_t comm_cost = 0;
  RunStatus status = RunStatus::max_iters;
};

/// hybrid_greedy(B) for each budget; writes sweep.csv when out_dir is set.
std::vector<SweepRow> run_lfc_sweep(const SimpleGraph& g, const std::vector<Index>& budgets,
                                    const ExperimentConfig& cfg,
                                    const std::optional<std::filesystem::path>& out_dir);

nlohmann::json to_json(const RateProfile& p);
nlohmann::json to_json(const ComparisonReport& r);
nlohmann::json to_json(const GridSearchResult& r);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace hycon
