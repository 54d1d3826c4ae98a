#include "hycon/costs.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hycon/random.hpp"

namespace hycon {

namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

[[noreturn]] void resolvent_failure(double residual, double target, int iters) {
  std::ostringstream os;
  os << "resolvent solve did not converge after " << iters << " iterations: residual "
     << residual << " > target " << target;
  throw ResolventError(os.str());
}

Eigen::VectorXd separable_newton(const LocalCost& f, double a, const VectorRef& b) {
  const Index n = f.dim();
  const double target = kResolventTolerance * (1.0 + b.norm());
  const double slope = f.strong_convexity() + a;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd g = f.gradient(x) - b;
  // g is increasing with slope >= sigma + a, so the root lies within |g(0)|/slope of 0.
  Eigen::VectorXd lo(n), hi(n);
  for (Index c = 0; c < n; ++c) {
    const double reach = -g(c) / slope;
    lo(c) = std::min(0.0, reach);
    hi(c) = std::max(0.0, reach);
  }

  for (int it = 0; it < kResolventMaxIterations; ++it) {
    if (g.norm() <= target) return x;
    const Eigen::VectorXd curv = f.hessian(x).diagonal().array() + a;
    for (Index c = 0; c < n; ++c) {
      if (g(c) > 0) hi(c) = std::min(hi(c), x(c));
      else if (g(c) < 0) lo(c) = std::max(lo(c), x(c));
      else continue;
      double next = x(c) - g(c) / curv(c);
      if (!(next > lo(c) && next < hi(c))) next = 0.5 * (lo(c) + hi(c));
      x(c) = next;
    }
    g = f.gradient(x) + a * x - b;
  }
  if (g.norm() <= target) return x;
  resolvent_failure(g.norm(), target, kResolventMaxIterations);
}

Eigen::VectorXd damped_newton(const LocalCost& f, double a, const VectorRef& b) {
  const Index n = f.dim();
  const double target = kResolventTolerance * (1.0 + b.norm());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = f.gradient(x) + a * x - b;
  for (int it = 0; it < kResolventMaxIterations; ++it) {
    const double rn = r.norm();
    if (rn <= target) return x;
    Eigen::MatrixXd jac = f.hessian(x);
    jac.diagonal().array() += a;
    const Eigen::VectorXd dx = jac.ldlt().solve(-r);
    double t = 1.0;
    Eigen::VectorXd trial = x + dx;
    Eigen::VectorXd rt = f.gradient(trial) + a * trial - b;
    while (rt.norm() > (1.0 - 1e-4 * t) * rn && t > 1e-12) {
      t *= 0.5;
      trial = x + t * dx;
      rt = f.gradient(trial) + a * trial - b;
    }
    x = trial;
    r = rt;
  }
  if (r.norm() <= target) return x;
  resolvent_failure(r.norm(), target, kResolventMaxIterations);
}

}  // namespace

Eigen::VectorXd LocalCost::resolvent(double a, const VectorRef& b) const {
  if (!(a > 0)) throw std::invalid_argument("resolvent weight must be positive");
  return separable() ? separable_newton(*this, a, b) : damped_newton(*this, a, b);
}

Eigen::VectorXd QuadraticCost::resolvent(double a, const VectorRef& b) const {
  if (!(a > 0)) throw std::invalid_argument("resolvent weight must be positive");
  return (obs_ + b) / (1.0 + a);
}

// ---------------------------------------------------------------------------

SoftplusCost::SoftplusCost(Eigen::VectorXd observation, double mu, double gamma)
    : obs_(std::move(observation)), mu_(mu), gamma_(gamma) {
  if (!(mu > 0) || !(gamma >= 0)) throw std::invalid_argument("SoftplusCost needs mu > 0, gamma >= 0");
}

double SoftplusCost::value(const VectorRef& x) const {
  double v = 0.5 * mu_ * (x - obs_).squaredNorm();
  for (Index c = 0; c < x.size(); ++c) v += gamma_ * softplus(x(c) - obs_(c));
  return v;
}

Eigen::VectorXd SoftplusCost::gradient(const VectorRef& x) const {
  Eigen::VectorXd g = mu_ * (x - obs_);
  for (Index c = 0; c < x.size(); ++c) g(c) += gamma_ * sigmoid(x(c) - obs_(c));
  return g;
}

Eigen::MatrixXd SoftplusCost::hessian(const VectorRef& x) const {
  Eigen::VectorXd d(x.size());
  for (Index c = 0; c < x.size(); ++c) {
    const double s = sigmoid(x(c) - obs_(c));
    d(c) = mu_ + gamma_ * s * (1.0 - s);
  }
  return d.asDiagonal();
}

CoupledSoftplusCost::CoupledSoftplusCost(Eigen::MatrixXd curvature, Eigen::VectorXd center,
                                         Eigen::VectorXd direction, double gamma)
    : curvature_(std::move(curvature)),
      center_(std::move(center)),
      direction_(std::move(direction)),
      gamma_(gamma) {
  const Index n = center_.size();
  if (curvature_.rows() != n || curvature_.cols() != n || direction_.size() != n)
    throw std::invalid_argument("CoupledSoftplusCost dimension mismatch");
  if (!(gamma >= 0)) throw std::invalid_argument("CoupledSoftplusCost needs gamma >= 0");
  if ((curvature_ - curvature_.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("CoupledSoftplusCost curvature must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(curvature_, Eigen::EigenvaluesOnly);
  sigma_ = es.eigenvalues().minCoeff();
  if (!(sigma_ > 0)) throw std::invalid_argument("CoupledSoftplusCost curvature must be positive definite");
  lipschitz_ = es.eigenvalues().maxCoeff() + 0.25 * gamma_ * direction_.squaredNorm();
}

double CoupledSoftplusCost::value(const VectorRef& x) const {
  const Eigen::VectorXd d = x - center_;
  return 0.5 * d.dot(curvature_ * d) + gamma_ * softplus(direction_.dot(x));
}

Eigen::VectorXd CoupledSoftplusCost::gradient(const VectorRef& x) const {
  return curvature_ * (x - center_) + gamma_ * sigmoid(direction_.dot(x)) * direction_;
}

Eigen::MatrixXd CoupledSoftplusCost::hessian(const VectorRef& x) const {
  const double s = sigmoid(direction_.dot(x));
  return curvature_ + gamma_ * s * (1.0 - s) * direction_ * direction_.transpose();
}

// ---------------------------------------------------------------------------

CostModel::CostModel(std::vector<std::shared_ptr<const LocalCost>> costs)
    : costs_(std::move(costs)) {
  if (costs_.empty()) throw std::invalid_argument("cost model needs at least one node");
  dim_ = costs_.front()->dim();
  if (dim_ < 1) throw std::invalid_argument("cost dimension must be positive");
  quadratic_ = true;
  for (const auto& c : costs_) {
    if (!c) throw std::invalid_argument("null local cost");
    if (c->dim() != dim_) throw std::invalid_argument("local costs disagree on dimension");
    if (!(c->strong_convexity() > 0) || c->lipschitz() < c->strong_convexity())
      throw std::invalid_argument("local cost needs 0 < sigma <= L");
    quadratic_ = quadratic_ && dynamic_cast<const QuadraticCost*>(c.get()) != nullptr;
  }
}

CostModel CostModel::quadratic(const Eigen::MatrixXd& observations) {
  std::vector<std::shared_ptr<const LocalCost>> costs;
  costs.reserve(static_cast<std::size_t>(observations.rows()));
  for (Index i = 0; i < observations.rows(); ++i)
    costs.push_back(std::make_shared<QuadraticCost>(observations.row(i).transpose()));
  return CostModel(std::move(costs));
}

Eigen::VectorXd CostModel::resolvent(Index i, double a, const VectorRef& b) const {
  return costs_[i]->resolvent(a, b);
}

Eigen::MatrixXd CostModel::stacked_gradient(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd g(x.rows(), x.cols());
  for (Index i = 0; i < num_nodes(); ++i) g.row(i) = costs_[i]->gradient(x.row(i).transpose()).transpose();
  return g;
}

double CostModel::condition_number() const {
  double k = 0.0;
  for (const auto& c : costs_) k = std::max(k, c->lipschitz() / c->strong_convexity());
  return k;
}

double CostModel::min_strong_convexity() const {
  double s = costs_.front()->strong_convexity();
  for (const auto& c : costs_) s = std::min(s, c->strong_convexity());
  return s;
}

double CostModel::max_lipschitz() const {
  double l = 0.0;
  for (const auto& c : costs_) l = std::max(l, c->lipschitz());
  return l;
}

Eigen::VectorXd CostModel::global_minimizer() const {
  const auto n = static_cast<double>(num_nodes());
  if (quadratic_) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim_);
    for (const auto& c : costs_) sum += static_cast<const QuadraticCost&>(*c).observation();
    return sum / n;
  }

  auto total_value = [&](const Eigen::VectorXd& x) {
    double v = 0.0;
    for (const auto& c : costs_) v += c->value(x);
    return v;
  };
  auto total_gradient = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim_);
    for (const auto& c : costs_) g += c->gradient(x);
    return g;
  };

  const double target = 1e-13 * n;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_);
  Eigen::VectorXd g = total_gradient(x);
  for (int it = 0; it < 100 && g.norm() > target; ++it) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim_, dim_);
    for (const auto& c : costs_) h += c->hessian(x);
    const Eigen::VectorXd dx = h.ldlt().solve(-g);
    const double v0 = total_value(x);
    const double slope = g.dot(dx);
    double t = 1.0;
    while (total_value(x + t * dx) > v0 + 1e-4 * t * slope && t > 1e-12) t *= 0.5;
    const Eigen::VectorXd next = x + t * dx;
    const Eigen::VectorXd gn = total_gradient(next);
    // Near the optimum the value test is dominated by rounding; fall back to
    // accepting a full step whenever it shrinks the gradient.
    if (t <= 1e-12) {
      const Eigen::VectorXd full = x + dx;
      const Eigen::VectorXd gf = total_gradient(full);
      if (gf.norm() >= g.norm()) break;
      x = full;
      g = gf;
      continue;
    }
    x = next;
    g = gn;
  }
  return x;
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd noisy_observations(Index num_nodes, Index dim, double x0, double noise_var,
                                   std::uint64_t seed) {
  if (num_nodes < 1 || dim < 1) throw std::invalid_argument("observation shape must be positive");
  if (!(noise_var >= 0)) throw std::invalid_argument("noise variance must be non-negative");
  Rng rng(seed);
  const double sd = std::sqrt(noise_var);
  Eigen::MatrixXd obs(num_nodes, dim);
  for (Index i = 0; i < num_nodes; ++i)
    for (Index c = 0; c < dim; ++c) obs(i, c) = x0 + sd * rng.normal();
  return obs;
}

Eigen::MatrixXd read_observations_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open observations file " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad number '" + cell + "' in " + path.string());
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::invalid_argument("ragged observations file " + path.string());
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty())
    throw std::invalid_argument("empty observations file " + path.string());
  Eigen::MatrixXd obs(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < obs.rows(); ++i)
    for (Index c = 0; c < obs.cols(); ++c) obs(i, c) = rows[i][c];
  return obs;
}

}  // namespace hycon
