#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

#include "hycon/analysis.hpp"
#include "hycon/graphgen.hpp"
#include "support.hpp"

using namespace hycon;

namespace {

Eigen::MatrixXd random_symmetric(Rng& rng, Index n) {
  Eigen::MatrixXd m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = rng.normal();
  return 0.5 * (m + m.transpose());
}

}  // namespace

TEST_CASE("Jacobi eigensolver agrees with Eigen") {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const Index n = 1 + static_cast<Index>(rng.below(30));
    const Eigen::MatrixXd m = random_symmetric(rng, n);
    const auto eig = jacobi_eigen(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(m);
    CHECK((eig.values - oracle.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, m.norm()));
    CHECK((eig.vectors.transpose() * eig.vectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose() - m).cwiseAbs().maxCoeff() <= 1e-10);
  }
  CHECK_THROWS_AS(jacobi_eigen(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 2, 0, 1;
  CHECK_THROWS_AS(jacobi_eigen(asym), std::invalid_argument);
  CHECK(jacobi_eigen(Eigen::MatrixXd::Zero(3, 3)).values == Eigen::VectorXd::Zero(3));
}

TEST_CASE("Jacobi eigensolver is scalar generic") {
  Eigen::Matrix3f m;
  m << 2, 1, 0, 1, 2, 1, 0, 1, 2;
  const auto eig = jacobi_eigen(m);
  static_assert(std::is_same_v<decltype(eig.values)::Scalar, float>);
  CHECK(eig.values(0) == doctest::Approx(2 - std::sqrt(2.0)).epsilon(1e-5));
  CHECK(eig.values(2) == doctest::Approx(2 + std::sqrt(2.0)).epsilon(1e-5));
}

TEST_CASE("PSD square root and pseudoinverse") {
  Rng rng(6);
  const auto alg = incidence_algebra(testing::random_hypergraph(rng, 12));
  const Eigen::MatrixXd q = psd_sqrt(alg.half_laplacian);
  CHECK((q * q - alg.half_laplacian).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((q - q.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  const Eigen::MatrixXd qp = psd_sqrt_pinv(alg.half_laplacian);
  // Moore-Penrose conditions.
  CHECK((q * qp * q - q).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((qp * q * qp - qp).cwiseAbs().maxCoeff() <= 1e-10);
  // Q Q+ projects onto the complement of the consensus direction.
  const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(12, 12) - Eigen::MatrixXd::Constant(12, 12, 1.0 / 12);
  CHECK((q * qp - proj).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK_THROWS_AS(psd_sqrt(-Eigen::MatrixXd::Identity(2, 2)), std::invalid_argument);
}

TEST_CASE("graph condition") {
  const auto hub = graph_condition(incidence_algebra(single_hub(10)));
  CHECK(hub.Lambda == doctest::Approx(1.0));
  CHECK(hub.lambda2 == doctest::Approx(1.0));
  CHECK(hub.kappa_G == doctest::Approx(1.0));

  // Path of n nodes, per-edge: D - S = L/2, lambda2 = (1 - cos(pi/n)).
  const Index n = 9;
  const auto line = graph_condition(incidence_algebra(from_simple_edges(generate(GenSpec{GraphFamily::line, n}))));
  CHECK(line.lambda2 == doctest::Approx(1 - std::cos(M_PI / n)).epsilon(1e-10));

  CHECK_THROWS_AS(graph_condition(incidence_algebra(Hypergraph(4, {{0, 1}, {2, 3}}))), DisconnectedError);
}

TEST_CASE("parameter formulas") {
  Rng rng(10);
  for (int t = 0; t < 50; ++t) {
    const double sigma = 0.1 + rng.uniform();
    const double lip = sigma * (1 + 10 * rng.uniform());
    const double Lambda = 0.5 + rng.uniform();
    const double lambda2 = Lambda * (0.01 + 0.99 * rng.uniform());
    const auto p = optimal_parameters(sigma, lip, Lambda, lambda2);

    // Both branches of the rate bound coincide at beta*.
    const double strong = 2 * p.beta_star * sigma / (p.rho_star * Lambda * (1 + 2 * Lambda / lambda2));
    const double smooth = (1 - p.beta_star) * p.rho_star * lambda2 / lip;
    CHECK(std::abs(strong - smooth) <= 1e-12 * std::max(1.0, strong));
    CHECK(p.delta == doctest::Approx(rate_bound(sigma, lip, Lambda, lambda2, p.rho_star, p.beta_star)).epsilon(1e-12));

    // rho* maximizes the balanced rate.
    for (double f : {0.5, 0.9, 1.1, 2.0})
      CHECK(balanced_delta(sigma, lip, Lambda, lambda2, f * p.rho_star) < p.delta);
    // Any other beta is no better.
    for (double b : {0.1, 0.5, 0.9})
      CHECK(rate_bound(sigma, lip, Lambda, lambda2, p.rho_star, b) <= p.delta * (1 + 1e-12));

    // Joint scaling of sigma and L rescales rho* and leaves beta*, delta alone.
    const double c = 0.1 + 10 * rng.uniform();
    const auto q = optimal_parameters(c * sigma, c * lip, Lambda, lambda2);
    CHECK(q.rho_star == doctest::Approx(c * p.rho_star).epsilon(1e-12));
    CHECK(q.beta_star == doctest::Approx(p.beta_star).epsilon(1e-12));
    CHECK(q.delta == doctest::Approx(p.delta).epsilon(1e-12));

    // delta* = rho* lambda / (2 L), sqrt(2) below the closed form.
    CHECK(p.delta == doctest::Approx(p.rho_star * lambda2 / (2 * lip)).epsilon(1e-12));
    CHECK(p.delta_reference_bound == doctest::Approx(std::sqrt(2.0) * p.delta).epsilon(1e-12));
  }
  CHECK(std::abs(condition_delta_bound(1, 1) - 1 / std::sqrt(3.0)) <= 1e-15);
  CHECK_THROWS_AS(optimal_parameters(0, 1, 1, 1), std::invalid_argument);
}

TEST_CASE("iteration bound estimate") {
  CHECK(iteration_bound_estimate(1.0, 0.5) == 2);  // log 4 / log 2
  CHECK(iteration_bound_estimate(0.1, 1e-8) == static_cast<Index>(std::ceil(-2 * std::log(1e-8) / std::log(1.1))));
  CHECK_THROWS_AS(iteration_bound_estimate(0.1, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(iteration_bound_estimate(0.0, 0.1), std::invalid_argument);
}

TEST_CASE("rate profile of a quadratic model") {
  const auto model = CostModel::quadratic(noisy_observations(10, 1, 1.0, 0.1, 1));
  const auto p = rate_profile(incidence_algebra(single_hub(10)), model);
  CHECK(p.kappa_F == 1);
  CHECK(p.kappa_G == doctest::Approx(1));
  CHECK(p.rho_star == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(p.delta_reference_bound == doctest::Approx(1 / std::sqrt(3.0)));
  CHECK(iteration_bound_estimate(p, 1e-8) > 0);
}

TEST_CASE("KKT point and certificate") {
  GenSpec er;
  er.family = GraphFamily::erdos_renyi;
  er.num_nodes = 15;
  er.edge_prob = 0.3;
  er.seed = 3;
  const auto h = from_simple_edges(generate(er));
  const auto model = CostModel::quadratic(noisy_observations(15, 2, 1.0, 0.1, 5));
  const auto alg = incidence_algebra(h);
  const auto kkt = kkt_point(alg, model, model.global_minimizer());
  CHECK(kkt.residual <= 1e-12);
  CHECK_THROWS_AS(kkt_point(alg, model, Eigen::VectorXd::Zero(3)), std::invalid_argument);

  const auto p = rate_profile(alg, model);
  SolverConfig cfg;
  cfg.rho = p.rho_star;
  cfg.max_iters = 20000;
  cfg.tolerance = 1e-10;
  cfg.record_states = true;
  const GNormDistance probe(alg, kkt, cfg.rho);
  const auto res = run(h, model, cfg, {}, std::cref(probe));
  REQUIRE(res.trace.status == RunStatus::converged);

  const auto rep = rate_certificate(res.states, alg, model, cfg.rho, kkt);
  CHECK(rep.passed());
  CHECK(rep.max_optimality_residual <= 1e-8);
  CHECK(rep.delta == doctest::Approx(p.delta));
  REQUIRE(rep.gnorm_sq.size() == res.trace.records.size());
  for (std::size_t k = 0; k < rep.gnorm_sq.size(); ++k)
    CHECK(*res.trace.records[k].gnorm_sq == doctest::Approx(rep.gnorm_sq[k]).epsilon(1e-9).scale(rep.gnorm_sq[0]));

  // A deliberately wrong optimum breaks the contraction.
  auto wrong = kkt;
  wrong.X.array() += 0.1;
  CHECK_FALSE(rate_certificate(res.states, alg, model, cfg.rho, wrong).passed());
}
