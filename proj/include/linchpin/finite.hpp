#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace linchpin {

// Dense-matrix correctness oracles for finite state spaces. These are
// validation devices, not production sampling paths; instances are kept
// small enough for exact arithmetic on dense matrices.
constexpr int kFiniteStateCap = 4096;

/// Enumerated chain: stationary vector f and row-stochastic transition
/// matrix P over the same state ordering.
struct FiniteChainSpec {
  Eigen::VectorXd stationary;
  Eigen::MatrixXd transition;

  Eigen::Index size() const { return stationary.size(); }
  void validate(double tol = 1e-12) const;  // throws std::domain_error
};

/// Max over pairs of |f_i P_ij - f_j P_ji|; zero for reversible chains.
double detailed_balance_violation(const FiniteChainSpec& spec);

/// ||f^T P - f^T||_inf; zero when f is invariant for P.
double invariance_violation(const FiniteChainSpec& spec);

/// Exact total variation distances ||P^n(start, .) - f|| for n = 1..n_max,
/// computed by repeated row-vector/matrix products.
std::vector<double> tv_curve(const FiniteChainSpec& spec, Eigen::Index start, int n_max);

/// Compose a marginal kernel on Y with a conditional table for X given Y
/// into the joint chain over (x, y) pairs. `conditional` is nx-by-ny with
/// column y holding f(x | y) (columns sum to 1 within 1e-12);
/// `marginal_kernel` is ny-by-ny with invariant vector `marginal_stationary`.
/// Joint states are indexed as y * nx + x; the joint entry is
/// f(x' | y') k_Y(y' | y), independent of x, and the joint stationary
/// vector is f(x | y) f_Y(y).
FiniteChainSpec joint_transition_matrix(const Eigen::MatrixXd& marginal_kernel,
                                        const Eigen::VectorXd& marginal_stationary,
                                        const Eigen::MatrixXd& conditional);

/// Max over n = 1..n_max, marginal starts y, and joint starts (x, y) of
/// |TV_joint(n) - TV_marginal(n)|: the two chains converge at the same
/// rate, so this is zero up to rounding when `joint` was composed from
/// `marginal` by joint_transition_matrix.
double same_rate_discrepancy(const FiniteChainSpec& joint, const FiniteChainSpec& marginal,
                             int n_max);

/// Max difference between joint transition rows that share a y-coordinate;
/// zero because the composed step never reads x.
double x_dependence_violation(const FiniteChainSpec& joint, Eigen::Index nx);

/// Exact Metropolis-Hastings transition matrix on an enumerated space:
/// P(i -> j) = Q(i, j) min{1, w_j Q(j, i) / (w_i Q(i, j))} for j != i with
/// rejection mass on the diagonal. `weights` are unnormalized stationary
/// masses; `proposal` rows must sum to 1.
Eigen::MatrixXd mh_transition_matrix(const Eigen::VectorXd& weights,
                                     const Eigen::MatrixXd& proposal);

/// Nearest-neighbour symmetric proposal on a path of n states: move one
/// step left or right with probability 1/2 each; off-grid mass stays put
/// (as a rejected MH proposal would).
Eigen::MatrixXd neighbor_proposal(Eigen::Index n);

/// Midpoint-mass discretization of a 2-d log density onto an nx-by-ny
/// grid, renormalized to an exact finite joint: cell (i, j) carries
/// exp(log_density(x_i, y_j)) over the grid midpoints.
struct Grid2d {
  Eigen::VectorXd x_points;      // nx midpoints
  Eigen::VectorXd y_points;      // ny midpoints
  Eigen::MatrixXd joint;         // nx x ny, sums to 1
  Eigen::VectorXd y_marginal;    // ny, sums to 1
  Eigen::MatrixXd conditional;   // nx x ny, column sums 1: f(x | y)
};

Grid2d discretize_2d(const std::function<double(double, double)>& log_density,
                     double x_lo, double x_hi, Eigen::Index nx, double y_lo, double y_hi,
                     Eigen::Index ny);

}  // namespace linchpin
