#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "hycon/errors.hpp"

namespace hycon {

using Index = Eigen::Index;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

/// A strongly convex local cost with Lipschitz gradient.
///
/// The moduli are declared by the concrete cost, not estimated; the rate
/// analysis relies on them being exact bounds.
class LocalCost {
 public:
  virtual ~LocalCost() = default;

  virtual Index dim() const = 0;
  virtual double value(const VectorRef& x) const = 0;
  virtual Eigen::VectorXd gradient(const VectorRef& x) const = 0;
  virtual Eigen::MatrixXd hessian(const VectorRef& x) const = 0;
  virtual double strong_convexity() const = 0;
  virtual double lipschitz() const = 0;

  /// True when the gradient acts coordinate-wise (diagonal Hessian).
  virtual bool separable() const { return false; }

  /// Solves grad f(x) + a x = b for a > 0.
  ///
  /// The default uses safeguarded Newton: per coordinate inside a bracket of
  /// the monotone map when separable, otherwise damped multivariate Newton.
  /// Throws ResolventError if the residual target is missed in 200 iterations.
  virtual Eigen::VectorXd resolvent(double a, const VectorRef& b) const;
};

/// Residual target for resolvent solves: ||grad f(x) + a x - b|| <= tol (1 + ||b||).
inline constexpr double kResolventTolerance = 1e-12;
inline constexpr int kResolventMaxIterations = 200;

/// f(x) = 1/2 ||x - o||^2. sigma = L = 1, closed-form resolvent.
class QuadraticCost final : public LocalCost {
 public:
  explicit QuadraticCost(Eigen::VectorXd observation) : obs_(std::move(observation)) {}

  Index dim() const override { return obs_.size(); }
  double value(const VectorRef& x) const override { return 0.5 * (x - obs_).squaredNorm(); }
  Eigen::VectorXd gradient(const VectorRef& x) const override { return x - obs_; }
  Eigen::MatrixXd hessian(const VectorRef&) const override {
    return Eigen::MatrixXd::Identity(dim(), dim());
  }
  double strong_convexity() const override { return 1.0; }
  double lipschitz() const override { return 1.0; }
  bool separable() const override { return true; }
  Eigen::VectorXd resolvent(double a, const VectorRef& b) const override;

  const Eigen::VectorXd& observation() const { return obs_; }

 private:
  Eigen::VectorXd obs_;
};

/// f(x) = mu/2 ||x - o||^2 + gamma sum_c log(1 + exp(x_c - o_c)).
/// sigma = mu, L = mu + gamma/4. Separable; exercises the bracketed Newton path.
class SoftplusCost final : public LocalCost {
 public:
  SoftplusCost(Eigen::VectorXd observation, double mu, double gamma);

  Index dim() const override { return obs_.size(); }
  double value(const VectorRef& x) const override;
  Eigen::VectorXd gradient(const VectorRef& x) const override;
  Eigen::MatrixXd hessian(const VectorRef& x) const override;
  double strong_convexity() const override { return mu_; }
  double lipschitz() const override { return mu_ + 0.25 * gamma_; }
  bool separable() const override { return true; }

 private:
  Eigen::VectorXd obs_;
  double mu_;
  double gamma_;
};

/// f(x) = 1/2 (x - o)^T H (x - o) + gamma log(1 + exp(w^T x)) with H SPD.
/// sigma = lambda_min(H), L = lambda_max(H) + gamma ||w||^2 / 4. Not separable.
class CoupledSoftplusCost final : public LocalCost {
 public:
  CoupledSoftplusCost(Eigen::MatrixXd curvature, Eigen::VectorXd center,
                      Eigen::VectorXd direction, double gamma);

  Index dim() const override { return center_.size(); }
  double value(const VectorRef& x) const override;
  Eigen::VectorXd gradient(const VectorRef& x) const override;
  Eigen::MatrixXd hessian(const VectorRef& x) const override;
  double strong_convexity() const override { return sigma_; }
  double lipschitz() const override { return lipschitz_; }

 private:
  Eigen::MatrixXd curvature_;
  Eigen::VectorXd center_;
  Eigen::VectorXd direction_;
  double gamma_;
  double sigma_;
  double lipschitz_;
};

/// The per-node costs f_1..f_N of a consensus problem min_x sum_i f_i(x).
/// Immutable; shares its costs.
class CostModel {
 public:
  explicit CostModel(std::vector<std::shared_ptr<const LocalCost>> costs);

  /// Consensus least squares: row i of `observations` is o_i.
  static CostModel quadratic(const Eigen::MatrixXd& observations);

  Index num_nodes() const { return static_cast<Index>(costs_.size()); }
  Index dim() const { return dim_; }
  const LocalCost& cost(Index i) const { return *costs_[i]; }

  Eigen::VectorXd gradient(Index i, const VectorRef& x) const { return costs_[i]->gradient(x); }
  Eigen::VectorXd resolvent(Index i, double a, const VectorRef& b) const;
  double strong_convexity(Index i) const { return costs_[i]->strong_convexity(); }
  double lipschitz(Index i) const { return costs_[i]->lipschitz(); }

  /// Stacked gradient: row i is grad f_i(X.row(i)).
  Eigen::MatrixXd stacked_gradient(const Eigen::MatrixXd& x) const;

  /// max_i L_i / sigma_i.
  double condition_number() const;
  double min_strong_convexity() const;
  double max_lipschitz() const;

  /// Minimizer of sum_i f_i(x). The mean of the observations for consensus
  /// least squares; damped Newton on the aggregate otherwise.
  Eigen::VectorXd global_minimizer() const;

  bool is_quadratic() const { return quadratic_; }

 private:
  std::vector<std::shared_ptr<const LocalCost>> costs_;
  Index dim_ = 0;
  bool quadratic_ = false;
};

/// o_i = x0 + eps_i with eps_i ~ N(0, noise_var) per coordinate, seeded.
Eigen::MatrixXd noisy_observations(Index num_nodes, Index dim, double x0, double noise_var,
                                   std::uint64_t seed);

/// One row per node, comma-separated, all rows of equal length.
Eigen::MatrixXd read_observations_csv(const std::filesystem::path& path);

}  // namespace hycon
