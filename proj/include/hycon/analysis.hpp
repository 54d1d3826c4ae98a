#pragma once

#include <Eigen/Core>
#include <Eigen/Jacobi>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "hycon/costs.hpp"
#include "hycon/errors.hpp"
#include "hycon/hypergraph.hpp"
#include "hycon/solver.hpp"

namespace hycon {

// ---------------------------------------------------------------------------
// Dense symmetric eigenproblems

template <typename Scalar>
struct SymmetricEigen {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;               // ascending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // columns
};

inline constexpr double kSymmetryTolerance = 1e-10;
inline constexpr double kJacobiOffDiagonalTolerance = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;

// A double-precision tolerance, widened to what Scalar can actually resolve.
template <typename Scalar>
Scalar scaled_tolerance(double tol) {
  return std::max(Scalar(tol), Scalar(64) * std::numeric_limits<Scalar>::epsilon());
}

/// Cyclic Jacobi eigendecomposition of a dense symmetric matrix.
///
/// Sweeps over all (p, q) pairs annihilating A(p, q) with a plane rotation
/// until the off-diagonal Frobenius norm drops below 1e-12 ||A||_F. Every
/// pair is then checked against ||A v - mu v|| <= 1e-9 ||A||_F. For float
/// both tolerances widen to 64 machine epsilons.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using std::abs;
  using std::sqrt;

  if (input.rows() != input.cols()) throw std::invalid_argument("eigenproblem needs a square matrix");
  const Matrix m = input;
  const Index n = m.rows();
  if (n > 0 && (m - m.transpose()).cwiseAbs().maxCoeff() > scaled_tolerance<Scalar>(kSymmetryTolerance))
    throw std::invalid_argument("matrix is not symmetric");

  Matrix a = m;
  Matrix v = Matrix::Identity(n, n);
  const Scalar scale = m.norm();
  auto off_diagonal = [&] {
    Scalar s(0);
    for (Index q = 0; q < n; ++q)
      for (Index p = 0; p < q; ++p) s += a(p, q) * a(p, q);
    return sqrt(Scalar(2) * s);
  };

  int sweep = 0;
  for (; sweep < kJacobiMaxSweeps; ++sweep) {
    if (off_diagonal() <= scaled_tolerance<Scalar>(kJacobiOffDiagonalTolerance) * scale) break;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (a(p, q) == Scalar(0)) continue;
        Eigen::JacobiRotation<Scalar> rot;
        rot.makeJacobi(a, p, q);
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
        a(p, q) = a(q, p) = Scalar(0);
        v.applyOnTheRight(p, q, rot);
      }
    }
  }
  if (sweep == kJacobiMaxSweeps && off_diagonal() > scaled_tolerance<Scalar>(kJacobiOffDiagonalTolerance) * scale)
    throw ConvergenceError("Jacobi eigensolver did not converge");

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return a(i, i) < a(j, j); });

  SymmetricEigen<Scalar> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }

  const Scalar bound = scaled_tolerance<Scalar>(1e-9) * std::max(scale, std::numeric_limits<Scalar>::min());
  for (Index k = 0; k < n; ++k) {
    const Scalar res = (m * out.vectors.col(k) - out.values(k) * out.vectors.col(k)).norm();
    if (res > bound) throw ConvergenceError("Jacobi eigenpair failed its residual check");
  }
  return out;
}

/// All eigenvalues of a symmetric matrix, ascending.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> symmetric_eigenvalues(
    const Eigen::MatrixBase<Derived>& m) {
  return jacobi_eigen(m).values;
}

inline constexpr double kPsdTolerance = 1e-10;

/// Symmetric square root of a PSD matrix. Eigenvalues within
/// 1e-10 max(1, lambda_max) of zero are taken as exact zeros, so a null
/// vector of m stays a null vector of the root (a rounding-level 1e-16
/// would otherwise turn into 1e-8). Anything below -1e-10 is rejected.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> psd_sqrt(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  auto eig = jacobi_eigen(m);
  if (eig.values.size() > 0 && eig.values(0) < -scaled_tolerance<Scalar>(kPsdTolerance))
    throw std::invalid_argument("matrix is not positive semidefinite");
  const Scalar top = eig.values.size() > 0 ? std::max(Scalar(1), eig.values.maxCoeff()) : Scalar(1);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> roots(eig.values.size());
  for (Index k = 0; k < roots.size(); ++k)
    roots(k) = eig.values(k) > scaled_tolerance<Scalar>(kPsdTolerance) * top ? std::sqrt(eig.values(k)) : Scalar(0);
  return eig.vectors * roots.asDiagonal() * eig.vectors.transpose();
}

/// Moore-Penrose pseudoinverse of psd_sqrt(m); eigenvalues at or below
/// cutoff * max(1, lambda_max) count as zero.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> psd_sqrt_pinv(
    const Eigen::MatrixBase<Derived>& m, typename Derived::Scalar cutoff = 1e-10) {
  using Scalar = typename Derived::Scalar;
  auto eig = jacobi_eigen(m);
  if (eig.values.size() > 0 && eig.values(0) < -scaled_tolerance<Scalar>(kPsdTolerance))
    throw std::invalid_argument("matrix is not positive semidefinite");
  const Scalar top = eig.values.size() > 0 ? std::max(Scalar(1), eig.values.maxCoeff()) : Scalar(1);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> inv(eig.values.size());
  for (Index k = 0; k < inv.size(); ++k)
    inv(k) = eig.values(k) > cutoff * top ? Scalar(1) / std::sqrt(eig.values(k)) : Scalar(0);
  return eig.vectors * inv.asDiagonal() * eig.vectors.transpose();
}

// ---------------------------------------------------------------------------
// Rate analysis

struct GraphCondition {
  double Lambda = 0.0;   // largest eigenvalue of C E^-1 C^T
  double lambda2 = 0.0;  // second smallest eigenvalue of D - C E^-1 C^T
  double kappa_G = 0.0;  // Lambda / lambda2
};

/// Throws DisconnectedError when lambda2 <= 1e-12.
GraphCondition graph_condition(const IncidenceAlgebrad& alg);

struct OptimalParameters {
  double rho_star = 0.0;
  double beta_star = 0.0;
  double delta = 0.0;
  /// Closed-form optimum quoted alongside the derivation,
  /// 1 / sqrt((L/sigma)(Lambda/lambda)(1 + 2 Lambda/lambda)). It exceeds the
  /// attained delta by a factor sqrt(2); kept only as a labelled reference.
  double delta_reference_bound = 0.0;
};

/// Largest admissible contraction parameter for given (rho, beta):
/// min{ 2 beta sigma / (rho Lambda (1 + 2 Lambda/lambda)), (1 - beta) rho lambda / L }.
/// The first branch is the form the optimal (rho, beta) below are derived
/// from; it coincides with 2 beta sigma / (rho (Lambda + 2 Lambda/lambda))
/// when Lambda = 1.
double rate_bound(double sigma, double lipschitz, double Lambda, double lambda2, double rho,
                  double beta);

/// beta equalizing both branches of rate_bound at this rho.
double balanced_beta(double sigma, double lipschitz, double Lambda, double lambda2, double rho);

/// rate_bound at balanced_beta:
/// 2 sigma rho lambda / (2 sigma L + rho^2 Lambda lambda (1 + 2 Lambda/lambda)).
double balanced_delta(double sigma, double lipschitz, double Lambda, double lambda2, double rho);

/// rho maximizing balanced_delta, sqrt(2 sigma L / (Lambda lambda (1 + 2 Lambda/lambda))),
/// with the matching beta and delta.
OptimalParameters optimal_parameters(double sigma, double lipschitz, double Lambda, double lambda2);

/// Everything the rate analysis knows about a (topology, costs) pair.
struct RateProfile {
  double Lambda = 0.0;
  double lambda2 = 0.0;
  double kappa_F = 0.0;
  double kappa_G = 0.0;
  double sigma = 0.0;      // min_i sigma_i
  double lipschitz = 0.0;  // max_i L_i
  double rho_star = 0.0;
  double beta_star = 0.0;
  double delta = 0.0;
  double delta_reference_bound = 0.0;
};

RateProfile rate_profile(const IncidenceAlgebrad& alg, const CostModel& model);

/// Upper bound on the optimal delta from the condition numbers:
/// 1 / sqrt(kappa_F kappa_G (1 + 2 kappa_G)).
double condition_delta_bound(double kappa_F, double kappa_G);

/// ceil(log(1/eps^2) / log(1 + delta)), with a 1e-9 allowance for rounding
/// in the quotient.
Index iteration_bound_estimate(double delta, double epsilon);
/// Uses condition_delta_bound(profile.kappa_F, profile.kappa_G).
Index iteration_bound_estimate(const RateProfile& profile, double epsilon);

// ---------------------------------------------------------------------------
// Linear convergence certificate

/// Saddle point of the consensus problem: X* = 1 x*^T, Z* = 1 x*^T,
/// Y* = -grad F(X*).
struct KktPoint {
  Eigen::VectorXd x_star;
  Eigen::MatrixXd X;
  Eigen::MatrixXd Z;
  Eigen::MatrixXd Y;
  double residual = 0.0;  // max violation over the three optimality blocks
};

KktPoint kkt_point(const IncidenceAlgebrad& alg, const CostModel& model,
                   const Eigen::VectorXd& x_star);

struct CertificateViolation {
  Index iter = 0;       // k, the check is between q^k and q^{k+1}
  double lhs = 0.0;     // ||q^{k+1} - q*||_G^2
  double rhs = 0.0;     // ||q^k - q*||_G^2 / (1 + delta)
};

struct CertificateReport {
  double delta = 0.0;
  std::vector<double> gnorm_sq;   // ||q^k - q*||_G^2 per state
  std::vector<double> ratios;     // gnorm_sq[k+1] / gnorm_sq[k]
  std::vector<CertificateViolation> violations;
  double max_optimality_residual = 0.0;
  bool passed() const { return violations.empty(); }
};

/// Computes r^k = Q (X^0 + ... + X^k) with Q = (D - S)^{1/2}, q^k = (r^k, X^k),
/// r* = Q^+ Y* / rho, and checks
///   ||q^{k+1} - q*||_G^2 <= ||q^k - q*||_G^2 / (1 + delta)
/// for consecutive states, where ||(r, x)||_G^2 = ||r||^2 + tr(x^T S x) and
/// delta = balanced_delta at this rho. Also records the largest entry of
///   S (X^{k+1} - X^k) + Q (r^{k+1} - r*) + (grad F(X^{k+1}) - grad F(X*)) / rho.
/// `states` must be consecutive iterates of a run started with Y = 0.
CertificateReport rate_certificate(std::span<const SolverState> states,
                                   const IncidenceAlgebrad& alg, const CostModel& model,
                                   double rho, const KktPoint& kkt);

/// Squared G-norm distance of one state to the saddle point, for GNormProbe.
class GNormDistance {
 public:
  GNormDistance(const IncidenceAlgebrad& alg, const KktPoint& kkt, double rho);
  double operator()(const SolverState& s) const;

 private:
  Eigen::MatrixXd root_;      // Q
  Eigen::MatrixXd averaging_; // S
  Eigen::MatrixXd r_star_;
  Eigen::MatrixXd x_star_;
};

}  // namespace hycon
