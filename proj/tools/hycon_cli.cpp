#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <sstream>
#include <string>

#include "hycon/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void print_summary(const hycon::ComparisonReport& report) {
  for (const auto& m : report.methods)
    std::printf("%-28s rho=%-10.4g iterations=%-7lld comm=%-10lld rel_acc=%.3e %s\n",
                m.method.c_str(), m.rho, static_cast<long long>(m.iterations),
                static_cast<long long>(m.comm_cost), m.final_rel_accuracy,
                std::string(hycon::to_string(m.status)).c_str());
}

json vector_json(const Eigen::Ref<const Eigen::RowVectorXd>& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

void cmd_solve(const hycon::ExperimentConfig& cfg, const fs::path& out) {
  const auto report = hycon::run_comparison(cfg, std::nullopt);
  json sol = json::object();
  for (const auto& m : report.methods) {
    std::ostringstream csv;
    hycon::write_trace_csv(csv, m.trace);
    hycon::write_file_atomic(out / ("trace_" + m.method + ".csv"), csv.str());
    sol[m.method] = {{"rho", m.rho},
                     {"iterations", m.iterations},
                     {"comm_cost", m.comm_cost},
                     {"final_rel_accuracy", m.final_rel_accuracy},
                     {"status", std::string(hycon::to_string(m.status))},
                     {"consensus", vector_json(m.consensus)}};
  }
  sol["x_star"] = vector_json(report.x_star.transpose());
  hycon::write_file_atomic(out / "solution.json", sol.dump(2) + "\n");
  print_summary(report);
}

void cmd_compare(const hycon::ExperimentConfig& cfg, const fs::path& out) {
  print_summary(hycon::run_comparison(cfg, out));
}

void cmd_sweep(const hycon::ExperimentConfig& cfg, const fs::path& out) {
  if (cfg.budgets.empty()) throw std::invalid_argument("sweep needs a 'budgets' list in the config");
  const auto g = hycon::load_graph(cfg);
  for (const auto& r : hycon::run_lfc_sweep(g, cfg.budgets, cfg, out))
    std::printf("budget=%-4lld rho=%-10.4g iterations=%-7lld comm=%lld %s\n",
                static_cast<long long>(r.budget), r.rho, static_cast<long long>(r.iterations),
                static_cast<long long>(r.comm_cost), std::string(hycon::to_string(r.status)).c_str());
}

void cmd_analyze(const hycon::ExperimentConfig& cfg, const fs::path& out) {
  if (cfg.methods.empty()) throw std::invalid_argument("config lists no methods");
  const auto g = hycon::load_graph(cfg);
  const auto model = hycon::load_costs(cfg, g.num_nodes());
  json doc = json::object();
  for (const auto& method : cfg.methods) {
    const auto topo = hycon::build_method_hypergraph(g, method, cfg.fc_seed);
    const auto profile = hycon::rate_profile(hycon::incidence_algebra<double>(topo.hypergraph), model);
    doc[method.label()] = {
        {"rate_profile", hycon::to_json(profile)},
        {"num_hyperedges", topo.hypergraph.num_hyperedges()},
        {"comm_cost_per_iter", hycon::comm_cost_per_iter(topo.hypergraph, topo.hosts)},
        {"iteration_bound_estimate", hycon::iteration_bound_estimate(profile, std::min(cfg.tolerance, 0.5))}};
    std::printf("%-28s kappa_G=%-10.4g rho*=%-10.4g delta=%.4g\n", method.label().c_str(),
                profile.kappa_G, profile.rho_star, profile.delta);
  }
  hycon::write_file_atomic(out / "analysis.json", doc.dump(2) + "\n");
}

void cmd_gridsearch(const hycon::ExperimentConfig& cfg, const fs::path& out) {
  if (cfg.methods.empty()) throw std::invalid_argument("config lists no methods");
  const auto g = hycon::load_graph(cfg);
  const auto model = hycon::load_costs(cfg, g.num_nodes());
  const Eigen::VectorXd x_star = model.global_minimizer();
  const auto grid = cfg.rho.empty() ? hycon::default_rho_grid() : cfg.rho;
  json doc = json::object();
  for (const auto& method : cfg.methods) {
    auto topo = hycon::build_method_hypergraph(g, method, cfg.fc_seed);
    hycon::SolverConfig sc;
    sc.max_iters = cfg.max_iters;
    sc.tolerance = cfg.tolerance;
    sc.variant = cfg.variant;
    sc.reference = x_star;
    const hycon::Problem problem{std::move(topo.hypergraph), std::move(topo.hosts), model, sc};
    const auto res = hycon::rho_grid_search(problem, grid);
    doc[method.label()] = hycon::to_json(res);
    std::printf("%-28s best_rho=%.4g%s\n", method.label().c_str(), res.best_rho,
                res.all_failed ? " (no rho reached tolerance)" : "");
  }
  hycon::write_file_atomic(out / "gridsearch.json", doc.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid consensus ADMM over hypergraphs of fusion centers"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  using Handler = void (*)(const hycon::ExperimentConfig&, const fs::path&);
  Handler handler = nullptr;

  auto add = [&](const char* name, const char* help, Handler h) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "flat JSON experiment config")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->callback([&handler, h] { handler = h; });
  };
  add("solve", "solve each configured method and write traces", cmd_solve);
  add("compare", "compare methods; writes trace CSVs and report.json", cmd_compare);
  add("sweep", "greedy fusion-center budget sweep; writes sweep.csv", cmd_sweep);
  add("analyze", "rate analysis per method without solving", cmd_analyze);
  add("gridsearch", "rho grid search per method", cmd_gridsearch);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto cfg = hycon::load_config(config_path);
    fs::create_directories(out_dir);
    handler(cfg, out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
