#pragma once

#include <Eigen/Core>

#include "hycon/costs.hpp"
#include "hycon/hypergraph.hpp"

namespace hycon {

// Classical consensus ADMM updates written out node by node, without any
// hypergraph machinery. They exist to cross-check the hybrid solver on its
// two special topologies.

/// Iterates of a classical consensus ADMM: local copies, duals, and the
/// fusion-center average (centralized form only).
struct ReferenceState {
  Eigen::MatrixXd x;
  Eigen::MatrixXd dual;
  Eigen::RowVectorXd average;

  static ReferenceState zeros(Index num_nodes, Index dim);
};

/// Centralized consensus ADMM with one global fusion center:
///   x_i+   solves grad f_i(x) + rho x = rho xbar - lambda_i
///   xbar+  = mean_i x_i+
///   lambda_i+ = lambda_i + rho (x_i+ - xbar+)
ReferenceState reference_ccadmm_step(ReferenceState s, const CostModel& model, double rho);

/// Decentralized consensus ADMM over neighbor links:
///   x_i+  solves grad f_i(x) + rho |N_i| x = rho/2 sum_{j in N_i} (x_i + x_j) - y_i
///   y_i+  = y_i + rho/2 sum_{j in N_i} (x_i+ - x_j+)
ReferenceState reference_dcadmm_step(ReferenceState s, const SimpleGraph& g,
                                     const CostModel& model, double rho);

}  // namespace hycon
