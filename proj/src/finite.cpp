#include "linchpin/finite.hpp"

#include <cmath>
#include <stdexcept>

namespace linchpin {

void FiniteChainSpec::validate(double tol) const {
  const Eigen::Index n = size();
  if (n == 0) throw std::domain_error("FiniteChainSpec: empty state space");
  if (n > kFiniteStateCap) throw std::domain_error("FiniteChainSpec: state space exceeds validator cap");
  if (transition.rows() != n || transition.cols() != n)
    throw std::domain_error("FiniteChainSpec: transition shape mismatch");
  if ((stationary.array() < 0.0).any())
    throw std::domain_error("FiniteChainSpec: stationary vector has negative entries");
  if (std::abs(stationary.sum() - 1.0) > tol)
    throw std::domain_error("FiniteChainSpec: stationary vector does not sum to 1");
  if ((transition.array() < -tol).any())
    throw std::domain_error("FiniteChainSpec: transition has negative entries");
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(transition.row(i).sum() - 1.0) > tol)
      throw std::domain_error("FiniteChainSpec: transition row does not sum to 1");
}

double detailed_balance_violation(const FiniteChainSpec& spec) {
  const Eigen::MatrixXd flow = spec.stationary.asDiagonal() * spec.transition;
  return (flow - flow.transpose()).cwiseAbs().maxCoeff();
}

double invariance_violation(const FiniteChainSpec& spec) {
  return (spec.stationary.transpose() * spec.transition - spec.stationary.transpose())
      .cwiseAbs()
      .maxCoeff();
}

std::vector<double> tv_curve(const FiniteChainSpec& spec, Eigen::Index start, int n_max) {
  if (n_max < 1) throw std::domain_error("tv_curve: n_max must be >= 1");
  if (start < 0 || start >= spec.size()) throw std::domain_error("tv_curve: start out of range");
  Eigen::RowVectorXd law = Eigen::RowVectorXd::Zero(spec.size());
  law[start] = 1.0;
  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    law = law * spec.transition;
    curve.push_back(0.5 * (law.transpose() - spec.stationary).cwiseAbs().sum());
  }
  return curve;
}

FiniteChainSpec joint_transition_matrix(const Eigen::MatrixXd& marginal_kernel,
                                        const Eigen::VectorXd& marginal_stationary,
                                        const Eigen::MatrixXd& conditional) {
  const Eigen::Index ny = marginal_kernel.rows();
  const Eigen::Index nx = conditional.rows();
  if (marginal_kernel.cols() != ny)
    throw std::domain_error("joint_transition_matrix: marginal kernel not square");
  if (marginal_stationary.size() != ny || conditional.cols() != ny)
    throw std::domain_error("joint_transition_matrix: dimension mismatch");
  if (nx * ny > kFiniteStateCap)
    throw std::domain_error("joint_transition_matrix: joint space exceeds validator cap");
  for (Eigen::Index y = 0; y < ny; ++y) {
    if (std::abs(conditional.col(y).sum() - 1.0) > 1e-12)
      throw std::domain_error("joint_transition_matrix: conditional column does not sum to 1");
    if (std::abs(marginal_kernel.row(y).sum() - 1.0) > 1e-12)
      throw std::domain_error("joint_transition_matrix: marginal kernel row does not sum to 1");
  }

  FiniteChainSpec joint;
  joint.stationary.resize(nx * ny);
  joint.transition.resize(nx * ny, nx * ny);
  for (Eigen::Index y = 0; y < ny; ++y)
    for (Eigen::Index x = 0; x < nx; ++x)
      joint.stationary[y * nx + x] = conditional(x, y) * marginal_stationary[y];

  // Transition to (x', y') is f(x'|y') k_Y(y'|y) regardless of current x.
  for (Eigen::Index y = 0; y < ny; ++y) {
    Eigen::RowVectorXd row(nx * ny);
    for (Eigen::Index yp = 0; yp < ny; ++yp)
      for (Eigen::Index xp = 0; xp < nx; ++xp)
        row[yp * nx + xp] = conditional(xp, yp) * marginal_kernel(y, yp);
    for (Eigen::Index x = 0; x < nx; ++x) joint.transition.row(y * nx + x) = row;
  }
  return joint;
}

double same_rate_discrepancy(const FiniteChainSpec& joint, const FiniteChainSpec& marginal,
                             int n_max) {
  const Eigen::Index ny = marginal.size();
  if (joint.size() % ny != 0)
    throw std::domain_error("same_rate_discrepancy: joint size not a multiple of marginal size");
  const Eigen::Index nx = joint.size() / ny;
  double worst = 0.0;
  for (Eigen::Index y = 0; y < ny; ++y) {
    const std::vector<double> marginal_curve = tv_curve(marginal, y, n_max);
    for (Eigen::Index x = 0; x < nx; ++x) {
      const std::vector<double> joint_curve = tv_curve(joint, y * nx + x, n_max);
      for (int n = 0; n < n_max; ++n)
        worst = std::max(worst, std::abs(joint_curve[static_cast<std::size_t>(n)] -
                                         marginal_curve[static_cast<std::size_t>(n)]));
    }
  }
  return worst;
}

double x_dependence_violation(const FiniteChainSpec& joint, Eigen::Index nx) {
  if (nx <= 0 || joint.size() % nx != 0)
    throw std::domain_error("x_dependence_violation: bad x-block size");
  const Eigen::Index ny = joint.size() / nx;
  double worst = 0.0;
  for (Eigen::Index y = 0; y < ny; ++y)
    for (Eigen::Index x = 1; x < nx; ++x)
      worst = std::max(worst, (joint.transition.row(y * nx + x) -
                               joint.transition.row(y * nx))
                                  .cwiseAbs()
                                  .maxCoeff());
  return worst;
}

Eigen::MatrixXd mh_transition_matrix(const Eigen::VectorXd& weights,
                                     const Eigen::MatrixXd& proposal) {
  const Eigen::Index n = weights.size();
  if (proposal.rows() != n || proposal.cols() != n)
    throw std::domain_error("mh_transition_matrix: proposal shape mismatch");
  if ((weights.array() < 0.0).any() || weights.sum() <= 0.0)
    throw std::domain_error("mh_transition_matrix: weights must be nonnegative, not all zero");

  Eigen::MatrixXd matrix = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double stay = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i || proposal(i, j) == 0.0) continue;
      double accept = 1.0;
      if (weights[i] > 0.0)
        accept = std::min(1.0, weights[j] * proposal(j, i) / (weights[i] * proposal(i, j)));
      const double move = proposal(i, j) * accept;
      matrix(i, j) = move;
      stay -= move;
    }
    matrix(i, i) = stay;
  }
  return matrix;
}

Eigen::MatrixXd neighbor_proposal(Eigen::Index n) {
  if (n < 2) throw std::domain_error("neighbor_proposal: need at least two states");
  Eigen::MatrixXd proposal = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i > 0) proposal(i, i - 1) = 0.5;
    if (i + 1 < n) proposal(i, i + 1) = 0.5;
    // boundary mass proposes off-grid and is folded into staying put
    proposal(i, i) = 1.0 - proposal.row(i).sum();
  }
  return proposal;
}

Grid2d discretize_2d(const std::function<double(double, double)>& log_density,
                     double x_lo, double x_hi, Eigen::Index nx, double y_lo, double y_hi,
                     Eigen::Index ny) {
  if (nx < 1 || ny < 1) throw std::domain_error("discretize_2d: grid must be nonempty");
  if (!(x_lo < x_hi) || !(y_lo < y_hi)) throw std::domain_error("discretize_2d: empty box");

  Grid2d grid;
  grid.x_points.resize(nx);
  grid.y_points.resize(ny);
  const double dx = (x_hi - x_lo) / static_cast<double>(nx);
  const double dy = (y_hi - y_lo) / static_cast<double>(ny);
  for (Eigen::Index i = 0; i < nx; ++i) grid.x_points[i] = x_lo + (i + 0.5) * dx;
  for (Eigen::Index j = 0; j < ny; ++j) grid.y_points[j] = y_lo + (j + 0.5) * dy;

  Eigen::MatrixXd logw(nx, ny);
  for (Eigen::Index i = 0; i < nx; ++i)
    for (Eigen::Index j = 0; j < ny; ++j)
      logw(i, j) = log_density(grid.x_points[i], grid.y_points[j]);
  const double shift = logw.maxCoeff();
  grid.joint = (logw.array() - shift).exp();
  grid.joint /= grid.joint.sum();

  grid.y_marginal = grid.joint.colwise().sum();
  grid.conditional.resize(nx, ny);
  for (Eigen::Index j = 0; j < ny; ++j) {
    if (grid.y_marginal[j] <= 0.0)
      throw std::domain_error("discretize_2d: a y-column carries no mass");
    grid.conditional.col(j) = grid.joint.col(j) / grid.y_marginal[j];
  }
  return grid;
}

}  // namespace linchpin
