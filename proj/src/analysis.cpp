#include "hycon/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hycon {

GraphCondition graph_condition(const IncidenceAlgebrad& alg) {
  const auto s_values = symmetric_eigenvalues(alg.averaging);
  const auto l_values = symmetric_eigenvalues(alg.half_laplacian);
  GraphCondition gc;
  gc.Lambda = s_values.maxCoeff();
  gc.lambda2 = l_values.size() > 1 ? l_values(1) : 0.0;
  if (gc.lambda2 <= 1e-12)
    throw DisconnectedError("second smallest Laplacian eigenvalue is zero; hypergraph is disconnected");
  gc.kappa_G = gc.Lambda / gc.lambda2;
  return gc;
}

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0)) throw std::invalid_argument(std::string(name) + " must be positive");
}

// Lambda lambda (1 + 2 Lambda / lambda)
double spectral_term(double Lambda, double lambda2) {
  return Lambda * lambda2 * (1.0 + 2.0 * Lambda / lambda2);
}

}  // namespace

double rate_bound(double sigma, double lipschitz, double Lambda, double lambda2, double rho,
                  double beta) {
  const double strong = 2.0 * beta * sigma / (rho * Lambda * (1.0 + 2.0 * Lambda / lambda2));
  const double smooth = (1.0 - beta) * rho * lambda2 / lipschitz;
  return std::min(strong, smooth);
}

double balanced_beta(double sigma, double lipschitz, double Lambda, double lambda2, double rho) {
  const double t = rho * rho * spectral_term(Lambda, lambda2);
  return t / (2.0 * sigma * lipschitz + t);
}

double balanced_delta(double sigma, double lipschitz, double Lambda, double lambda2, double rho) {
  return 2.0 * sigma * rho * lambda2 /
         (2.0 * sigma * lipschitz + rho * rho * spectral_term(Lambda, lambda2));
}

OptimalParameters optimal_parameters(double sigma, double lipschitz, double Lambda,
                                     double lambda2) {
  require_positive(sigma, "sigma");
  require_positive(lipschitz, "lipschitz");
  require_positive(Lambda, "Lambda");
  require_positive(lambda2, "lambda2");
  OptimalParameters p;
  p.rho_star = std::sqrt(2.0 * sigma * lipschitz / spectral_term(Lambda, lambda2));
  p.beta_star = balanced_beta(sigma, lipschitz, Lambda, lambda2, p.rho_star);
  p.delta = balanced_delta(sigma, lipschitz, Lambda, lambda2, p.rho_star);
  const double ratio = Lambda / lambda2;
  p.delta_reference_bound = 1.0 / std::sqrt(lipschitz / sigma * ratio * (1.0 + 2.0 * ratio));
  return p;
}

RateProfile rate_profile(const IncidenceAlgebrad& alg, const CostModel& model) {
  const auto gc = graph_condition(alg);
  RateProfile rp;
  rp.Lambda = gc.Lambda;
  rp.lambda2 = gc.lambda2;
  rp.kappa_G = gc.kappa_G;
  rp.kappa_F = model.condition_number();
  rp.sigma = model.min_strong_convexity();
  rp.lipschitz = model.max_lipschitz();
  const auto opt = optimal_parameters(rp.sigma, rp.lipschitz, rp.Lambda, rp.lambda2);
  rp.rho_star = opt.rho_star;
  rp.beta_star = opt.beta_star;
  rp.delta = opt.delta;
  rp.delta_reference_bound = opt.delta_reference_bound;
  return rp;
}

double condition_delta_bound(double kappa_F, double kappa_G) {
  require_positive(kappa_F, "kappa_F");
  require_positive(kappa_G, "kappa_G");
  return 1.0 / std::sqrt(kappa_F * kappa_G * (1.0 + 2.0 * kappa_G));
}

Index iteration_bound_estimate(double delta, double epsilon) {
  require_positive(delta, "delta");
  if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  const double k = -2.0 * std::log(epsilon) / std::log1p(delta);
  return std::max<Index>(1, static_cast<Index>(std::ceil(k - 1e-9)));
}

Index iteration_bound_estimate(const RateProfile& profile, double epsilon) {
  return iteration_bound_estimate(condition_delta_bound(profile.kappa_F, profile.kappa_G), epsilon);
}

// ---------------------------------------------------------------------------

KktPoint kkt_point(const IncidenceAlgebrad& alg, const CostModel& model,
                   const Eigen::VectorXd& x_star) {
  const Index n = alg.num_nodes();
  const Index m = alg.num_hyperedges();
  if (x_star.size() != model.dim()) throw std::invalid_argument("x_star has the wrong dimension");
  KktPoint k;
  k.x_star = x_star;
  k.X = Eigen::MatrixXd::Ones(n, 1) * x_star.transpose();
  k.Z = Eigen::MatrixXd::Ones(m, 1) * x_star.transpose();
  k.Y = -model.stacked_gradient(k.X);

  const Eigen::MatrixXd stationarity = model.stacked_gradient(k.X) + k.Y;
  const Eigen::MatrixXd edge_avg =
      k.Z - alg.edge_degrees.cwiseInverse().asDiagonal() * (alg.incidence.transpose() * k.X);
  const Eigen::MatrixXd feasibility = alg.half_laplacian * k.X;
  // The dual must lie in the range of D - S: its columns sum to zero.
  const Eigen::RowVectorXd dual_mean = k.Y.colwise().sum();
  k.residual = std::max({stationarity.cwiseAbs().maxCoeff(), edge_avg.cwiseAbs().maxCoeff(),
                         feasibility.cwiseAbs().maxCoeff(), dual_mean.cwiseAbs().maxCoeff()});
  return k;
}

GNormDistance::GNormDistance(const IncidenceAlgebrad& alg, const KktPoint& kkt, double rho)
    : root_(psd_sqrt(alg.half_laplacian)),
      averaging_(alg.averaging),
      r_star_(psd_sqrt_pinv(alg.half_laplacian) * kkt.Y / rho),
      x_star_(kkt.X) {}

double GNormDistance::operator()(const SolverState& s) const {
  const Eigen::MatrixXd dr = root_ * s.running_sum - r_star_;
  const Eigen::MatrixXd dx = s.X - x_star_;
  return dr.squaredNorm() + (dx.transpose() * averaging_ * dx).trace();
}

CertificateReport rate_certificate(std::span<const SolverState> states,
                                   const IncidenceAlgebrad& alg, const CostModel& model,
                                   double rho, const KktPoint& kkt) {
  require_positive(rho, "rho");
  const auto gc = graph_condition(alg);
  CertificateReport rep;
  rep.delta = balanced_delta(model.min_strong_convexity(), model.max_lipschitz(), gc.Lambda,
                             gc.lambda2, rho);
  if (states.empty()) return rep;

  const Eigen::MatrixXd q_root = psd_sqrt(alg.half_laplacian);
  const Eigen::MatrixXd r_star = psd_sqrt_pinv(alg.half_laplacian) * kkt.Y / rho;
  const Eigen::MatrixXd grad_star = model.stacked_gradient(kkt.X);
  const Eigen::MatrixXd& s_mat = alg.averaging;

  Eigen::MatrixXd x_sum = Eigen::MatrixXd::Zero(kkt.X.rows(), kkt.X.cols());
  Eigen::MatrixXd prev_x;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto& st = states[k];
    if (k > 0 && st.iter != states[k - 1].iter + 1)
      throw std::invalid_argument("certificate needs consecutive iterates");
    x_sum += st.X;
    const Eigen::MatrixXd r = q_root * x_sum;
    const Eigen::MatrixXd dr = r - r_star;
    const Eigen::MatrixXd dx = st.X - kkt.X;
    rep.gnorm_sq.push_back(dr.squaredNorm() + (dx.transpose() * s_mat * dx).trace());

    if (k > 0) {
      const Eigen::MatrixXd opt = s_mat * (st.X - prev_x) + q_root * dr +
                                    (model.stacked_gradient(st.X) - grad_star) / rho;
      rep.max_optimality_residual = std::max(rep.max_optimality_residual, opt.cwiseAbs().maxCoeff());

      const double before = rep.gnorm_sq[k - 1];
      const double after = rep.gnorm_sq[k];
      rep.ratios.push_back(before > 0 ? after / before : 0.0);
      const double allowed = before / (1.0 + rep.delta);
      if (after > allowed) rep.violations.push_back({states[k - 1].iter, after, allowed});
    }
    prev_x = st.X;
  }
  return rep;
}

}  // namespace hycon
