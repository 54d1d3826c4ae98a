#include "hycon/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hycon/random.hpp"

namespace hycon {

using nlohmann::json;

namespace {

constexpr std::string_view kDedicatedPrefix = "hybrid_dedicated";
constexpr std::string_view kGreedyPrefix = "hybrid_greedy";

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Parses the text after "<prefix>:" or "<prefix>_".
std::optional<std::string_view> method_argument(std::string_view text, std::string_view prefix) {
  if (text.size() <= prefix.size() + 1 || text.substr(0, prefix.size()) != prefix) return std::nullopt;
  const char sep = text[prefix.size()];
  if (sep != ':' && sep != '_') return std::nullopt;
  return text.substr(prefix.size() + 1);
}

double parse_double(std::string_view s, std::string_view what) {
  std::string buf(s);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size())
    throw std::invalid_argument("bad " + std::string(what) + ": '" + buf + "'");
  return v;
}

Index parse_index(std::string_view s, std::string_view what) {
  std::string buf(s);
  char* end = nullptr;
  const long long v = std::strtoll(buf.c_str(), &end, 10);
  if (buf.empty() || end != buf.c_str() + buf.size())
    throw std::invalid_argument("bad " + std::string(what) + ": '" + buf + "'");
  return static_cast<Index>(v);
}

}  // namespace

Method Method::parse(std::string_view text) {
  if (text == "centralized") return centralized();
  if (text == "decentralized") return decentralized();
  if (auto arg = method_argument(text, kDedicatedPrefix)) {
    const double p = parse_double(*arg, "dedicated fraction");
    if (!(p > 0 && p <= 1)) throw std::invalid_argument("dedicated fraction must lie in (0, 1]");
    return dedicated(p);
  }
  if (auto arg = method_argument(text, kGreedyPrefix)) {
    const Index b = parse_index(*arg, "greedy budget");
    if (b < 1) throw std::invalid_argument("greedy budget must be at least 1");
    return greedy(b);
  }
  throw std::invalid_argument("unknown method '" + std::string(text) + "'");
}

std::string Method::label() const {
  switch (kind) {
    case Kind::centralized: return "centralized";
    case Kind::decentralized: return "decentralized";
    case Kind::hybrid_dedicated: return std::string(kDedicatedPrefix) + "_" + format_number(fraction);
    case Kind::hybrid_greedy: return std::string(kGreedyPrefix) + "_" + std::to_string(budget);
  }
  return {};
}

MethodTopology build_method_hypergraph(const SimpleGraph& g, const Method& method,
                                       std::uint64_t seed) {
  const Index n = g.num_nodes();
  switch (method.kind) {
    case Method::Kind::centralized: {
      auto h = single_hub(n);
      return {h, HostMap(static_cast<std::size_t>(h.num_hyperedges()))};
    }
    case Method::Kind::decentralized: {
      auto h = from_simple_edges(g);
      return {h, HostMap(static_cast<std::size_t>(h.num_hyperedges()))};
    }
    case Method::Kind::hybrid_dedicated: {
      if (!(method.fraction > 0 && method.fraction <= 1))
        throw std::invalid_argument("dedicated fraction must lie in (0, 1]");
      // Guard against 0.2 * 50 landing a hair above 10.
      const auto k = static_cast<Index>(std::ceil(method.fraction * static_cast<double>(n) - 1e-9));
      if (k < 2)
        throw std::invalid_argument("dedicated fusion center would connect " + std::to_string(k) +
                                    " node(s); at least 2 are needed");
      auto base = from_simple_edges(g);
      auto edges = base.hyperedges();
      Rng rng(seed);
      const auto picked = rng.sample_without_replacement(n, k);
      edges.emplace_back(picked.begin(), picked.end());
      Hypergraph h(n, std::move(edges));
      return {h, HostMap(static_cast<std::size_t>(h.num_hyperedges()))};
    }
    case Method::Kind::hybrid_greedy: {
      auto cover = greedy_lfc_selection(g, method.budget);
      return {std::move(cover.hypergraph), std::move(cover.hosts)};
    }
  }
  throw std::invalid_argument("unknown method");
}

std::vector<double> default_rho_grid() {
  constexpr int kPoints = 17;
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) grid[i] = std::pow(10.0, -2.0 + 4.0 * i / (kPoints - 1));
  return grid;
}

unsigned worker_count() {
  if (const char* env = std::getenv("HYCON_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Calls fn(i) for i in [0, count) on up to worker_count() threads.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t threads = std::min<std::size_t>(worker_count(), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

GridSearchResult rho_grid_search(const Problem& problem, std::vector<double> grid) {
  if (grid.empty()) throw std::invalid_argument("rho grid is empty");
  for (double r : grid)
    if (!(r > 0)) throw std::invalid_argument("rho grid values must be positive");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  SolverConfig base = problem.solver;
  base.record_states = false;
  if (!base.reference) base.reference = problem.model.global_minimizer();

  GridSearchResult result;
  result.runs.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    SolverConfig cfg = base;
    cfg.rho = grid[i];
    const auto r = run(problem.hypergraph, problem.model, cfg, problem.hosts);
    result.runs[i] = {grid[i], r.trace.iterations(), r.trace.status, r.trace.final_rel_accuracy()};
  });

  const GridPoint* best = nullptr;
  for (const auto& p : result.runs)
    if (p.status == RunStatus::converged && (!best || p.iterations < best->iterations)) best = &p;
  if (!best) {
    result.all_failed = true;
    for (const auto& p : result.runs)
      if (!best || p.final_rel_accuracy < best->final_rel_accuracy) best = &p;
  }
  result.best_rho = best->rho;
  return result;
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

template <typename T>
T get_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw std::invalid_argument("config key '" + key + "' must be a number");
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw std::invalid_argument("config key '" + key + "' must be an integer");
  }
  return v.get<T>();
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw std::invalid_argument("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  ExperimentConfig cfg;
  bool have_family = false;
  for (const auto& [key, v] : j.items()) {
    if (key == "family") {
      cfg.graph.family = parse_graph_family(get_string(v, key));
      have_family = true;
    } else if (key == "num_nodes") {
      cfg.graph.num_nodes = get_number<Index>(v, key);
    } else if (key == "edge_prob") {
      cfg.graph.edge_prob = get_number<double>(v, key);
    } else if (key == "num_cliques") {
      cfg.graph.num_cliques = get_number<Index>(v, key);
    } else if (key == "clique_size") {
      cfg.graph.clique_size = get_number<Index>(v, key);
    } else if (key == "clique_fraction") {
      cfg.graph.clique_fraction = get_number<double>(v, key);
    } else if (key == "graph_seed") {
      cfg.graph.seed = get_number<std::uint64_t>(v, key);
    } else if (key == "graph_file") {
      cfg.graph_file = get_string(v, key);
    } else if (key == "method") {
      cfg.methods.push_back(Method::parse(get_string(v, key)));
    } else if (key == "methods") {
      if (!v.is_array()) throw std::invalid_argument("config key 'methods' must be a list");
      for (const auto& m : v) cfg.methods.push_back(Method::parse(get_string(m, key)));
    } else if (key == "x0") {
      cfg.cost.x0 = get_number<double>(v, key);
    } else if (key == "noise_var") {
      cfg.cost.noise_var = get_number<double>(v, key);
    } else if (key == "dim") {
      cfg.cost.dim = get_number<Index>(v, key);
    } else if (key == "cost_seed") {
      cfg.cost.seed = get_number<std::uint64_t>(v, key);
    } else if (key == "observations_csv") {
      cfg.cost.observations_csv = get_string(v, key);
    } else if (key == "rho") {
      if (v.is_string()) {
        if (v.get<std::string>() != "grid")
          throw std::invalid_argument("config key 'rho' must be a number, a list or \"grid\"");
        cfg.rho.clear();
      } else if (v.is_array()) {
        if (v.empty()) throw std::invalid_argument("config key 'rho' lists no values");
        for (const auto& r : v) cfg.rho.push_back(get_number<double>(r, key));
      } else {
        cfg.rho = {get_number<double>(v, key)};
      }
    } else if (key == "tolerance") {
      cfg.tolerance = get_number<double>(v, key);
    } else if (key == "max_iters") {
      cfg.max_iters = get_number<Index>(v, key);
    } else if (key == "budgets") {
      if (!v.is_array()) throw std::invalid_argument("config key 'budgets' must be a list");
      for (const auto& b : v) cfg.budgets.push_back(get_number<Index>(b, key));
    } else if (key == "fc_seed") {
      cfg.fc_seed = get_number<std::uint64_t>(v, key);
    } else if (key == "variant") {
      const auto s = get_string(v, key);
      if (s == "standard") cfg.variant = Variant::standard;
      else if (s == "memory") cfg.variant = Variant::memory;
      else throw std::invalid_argument("config key 'variant' must be \"standard\" or \"memory\"");
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  if (!have_family && !cfg.graph_file) throw std::invalid_argument("config needs 'family' or 'graph_file'");
  for (double r : cfg.rho)
    if (!(r > 0)) throw std::invalid_argument("rho must be positive");
  if (!(cfg.tolerance > 0)) throw std::invalid_argument("tolerance must be positive");
  if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be positive");
  if (!(cfg.cost.noise_var > 0)) throw std::invalid_argument("noise_var must be positive");
  if (cfg.cost.dim < 1) throw std::invalid_argument("dim must be positive");
  for (Index b : cfg.budgets)
    if (b < 1) throw std::invalid_argument("budgets must be at least 1");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

SimpleGraph load_graph(const ExperimentConfig& cfg) {
  if (cfg.graph_file) {
    std::ifstream in(*cfg.graph_file);
    if (!in) throw std::runtime_error("cannot open graph file " + cfg.graph_file->string());
    return read_simple_graph(in);
  }
  return generate(cfg.graph);
}

CostModel load_costs(const ExperimentConfig& cfg, Index num_nodes) {
  if (cfg.cost.observations_csv) {
    auto obs = read_observations_csv(*cfg.cost.observations_csv);
    if (obs.rows() != num_nodes)
      throw std::invalid_argument("observations file has " + std::to_string(obs.rows()) +
                                  " rows for " + std::to_string(num_nodes) + " nodes");
    return CostModel::quadratic(obs);
  }
  return CostModel::quadratic(
      noisy_observations(num_nodes, cfg.cost.dim, cfg.cost.x0, cfg.cost.noise_var, cfg.cost.seed));
}

// ---------------------------------------------------------------------------
// Experiments

namespace {

SolverConfig solver_config(const ExperimentConfig& cfg, const Eigen::VectorXd& x_star) {
  SolverConfig s;
  s.max_iters = cfg.max_iters;
  s.tolerance = cfg.tolerance;
  s.variant = cfg.variant;
  s.reference = x_star;
  return s;
}

double choose_rho(const ExperimentConfig& cfg, const Problem& problem) {
  if (cfg.rho.size() == 1) return cfg.rho.front();
  return rho_grid_search(problem, cfg.rho.empty() ? default_rho_grid() : cfg.rho).best_rho;
}

std::string trace_csv(const ConvergenceTrace& trace) {
  std::ostringstream out;
  write_trace_csv(out, trace);
  return out.str();
}

}  // namespace

ComparisonReport run_comparison(const ExperimentConfig& cfg,
                                const std::optional<std::filesystem::path>& out_dir) {
  if (cfg.methods.empty()) throw std::invalid_argument("config lists no methods");
  std::set<std::string> labels;
  for (const auto& m : cfg.methods)
    if (!labels.insert(m.label()).second) throw std::invalid_argument("method " + m.label() + " listed twice");

  const auto g = load_graph(cfg);
  const auto model = load_costs(cfg, g.num_nodes());

  ComparisonReport report;
  report.x_star = model.global_minimizer();
  for (const auto& method : cfg.methods) {
    auto topo = build_method_hypergraph(g, method, cfg.fc_seed);
    Problem problem{std::move(topo.hypergraph), std::move(topo.hosts), model,
                    solver_config(cfg, report.x_star)};

    MethodReport mr;
    mr.method = method.label();
    mr.rho = choose_rho(cfg, problem);
    problem.solver.rho = mr.rho;
    auto res = run(problem.hypergraph, problem.model, problem.solver, problem.hosts);
    mr.iterations = res.trace.iterations();
    mr.comm_cost = res.trace.total_comm_cost();
    mr.final_rel_accuracy = res.trace.final_rel_accuracy();
    mr.status = res.trace.status;
    mr.rate_profile = rate_profile(incidence_algebra<double>(problem.hypergraph), model);
    mr.consensus = res.final_state.X.colwise().mean();
    mr.trace = std::move(res.trace);
    if (out_dir) write_file_atomic(*out_dir / ("trace_" + mr.method + ".csv"), trace_csv(mr.trace));
    report.methods.push_back(std::move(mr));
  }
  if (out_dir) write_file_atomic(*out_dir / "report.json", to_json(report).dump(2) + "\n");
  return report;
}

std::vector<SweepRow> run_lfc_sweep(const SimpleGraph& g, const std::vector<Index>& budgets,
                                    const ExperimentConfig& cfg,
                                    const std::optional<std::filesystem::path>& out_dir) {
  if (budgets.empty()) throw std::invalid_argument("sweep needs at least one budget");
  const auto model = load_costs(cfg, g.num_nodes());
  const Eigen::VectorXd x_star = model.global_minimizer();

  std::vector<SweepRow> rows;
  for (Index b : budgets) {
    auto topo = build_method_hypergraph(g, Method::greedy(b), cfg.fc_seed);
    Problem problem{std::move(topo.hypergraph), std::move(topo.hosts), model,
                    solver_config(cfg, x_star)};
    SweepRow row;
    row.budget = b;
    row.rho = choose_rho(cfg, problem);
    problem.solver.rho = row.rho;
    const auto res = run(problem.hypergraph, problem.model, problem.solver, problem.hosts);
    row.iterations = res.trace.iterations();
    row.comm_cost = res.trace.total_comm_cost();
    row.status = res.trace.status;
    rows.push_back(row);
  }
  if (out_dir) {
    std::ostringstream out;
    out << "budget,iterations,comm_cost\n";
    for (const auto& r : rows) out << r.budget << ',' << r.iterations << ',' << r.comm_cost << '\n';
    write_file_atomic(*out_dir / "sweep.csv", out.str());
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Serialization

json to_json(const RateProfile& p) {
  return {{"Lambda", p.Lambda},
          {"lambda2", p.lambda2},
          {"kappa_F", p.kappa_F},
          {"kappa_G", p.kappa_G},
          {"sigma", p.sigma},
          {"lipschitz", p.lipschitz},
          {"rho_star", p.rho_star},
          {"beta_star", p.beta_star},
          {"delta", p.delta},
          {"delta_reference_bound", p.delta_reference_bound}};
}

json to_json(const ComparisonReport& r) {
  json out = json::object();
  for (const auto& m : r.methods) {
    out[m.method] = {{"iterations", m.iterations},
                     {"comm_cost", m.comm_cost},
                     {"final_rel_accuracy", m.final_rel_accuracy},
                     {"rate_profile", to_json(m.rate_profile)},
                     {"rho", m.rho},
                     {"status", std::string(to_string(m.status))}};
  }
  return out;
}

json to_json(const GridSearchResult& r) {
  json runs = json::array();
  for (const auto& p : r.runs)
    runs.push_back({{"rho", p.rho},
                    {"iterations", p.iterations},
                    {"status", std::string(to_string(p.status))},
                    {"final_rel_accuracy", p.final_rel_accuracy}});
  return {{"best_rho", r.best_rho}, {"all_failed", r.all_failed}, {"runs", runs}};
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace hycon
