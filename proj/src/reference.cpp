#include "hycon/reference.hpp"

#include <stdexcept>

namespace hycon {

ReferenceState ReferenceState::zeros(Index num_nodes, Index dim) {
  return {Eigen::MatrixXd::Zero(num_nodes, dim), Eigen::MatrixXd::Zero(num_nodes, dim),
          Eigen::RowVectorXd::Zero(dim)};
}

ReferenceState reference_ccadmm_step(ReferenceState s, const CostModel& model, double rho) {
  const Index n = model.num_nodes();
  if (s.x.rows() != n || s.x.cols() != model.dim())
    throw std::invalid_argument("reference state shape mismatch");
  for (Index i = 0; i < n; ++i) {
    const Eigen::RowVectorXd rhs = rho * s.average - s.dual.row(i);
    s.x.row(i) = model.resolvent(i, rho, rhs.transpose()).transpose();
  }
  s.average = s.x.colwise().sum() / static_cast<double>(n);
  for (Index i = 0; i < n; ++i) s.dual.row(i) += rho * (s.x.row(i) - s.average);
  return s;
}

ReferenceState reference_dcadmm_step(ReferenceState s, const SimpleGraph& g,
                                     const CostModel& model, double rho) {
  const Index n = model.num_nodes();
  if (g.num_nodes() != n || s.x.rows() != n || s.x.cols() != model.dim())
    throw std::invalid_argument("reference state shape mismatch");
  const Eigen::MatrixXd prev = s.x;
  for (Index i = 0; i < n; ++i) {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(model.dim());
    for (Index j : g.neighbors(i)) acc += prev.row(i) + prev.row(j);
    const Eigen::RowVectorXd rhs = 0.5 * rho * acc - s.dual.row(i);
    s.x.row(i) =
        model.resolvent(i, rho * static_cast<double>(g.degree(i)), rhs.transpose()).transpose();
  }
  for (Index i = 0; i < n; ++i) {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(model.dim());
    for (Index j : g.neighbors(i)) acc += s.x.row(i) - s.x.row(j);
    s.dual.row(i) += 0.5 * rho * acc;
  }
  return s;
}

}  // namespace hycon
