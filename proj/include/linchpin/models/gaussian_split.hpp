#pragma once

#include <cstdint>
#include <vector>

#include "linchpin/sampler.hpp"
#include "linchpin/target.hpp"

namespace linchpin {

/// Correlation matrix with entries rho^|i-j|.
Eigen::MatrixXd ar1_correlation(int p, double rho);

/// A p-variate Gaussian split into a leading block of size p - r and a
/// trailing block of size r. The trailing block is the natural linchpin
/// coordinate: its marginal is Gaussian and the leading block's
/// conditional is available exactly, so the same target supports both a
/// two-block Gibbs sampler and a marginal-kernel composition.
struct GaussianSplitTarget {
  MvnParams params;
  int split;  // r, size of the trailing block

  GaussianSplitTarget(Eigen::VectorXd mean, Eigen::MatrixXd covariance, int r);

  int dim() const { return static_cast<int>(params.dim()); }

  TargetDensity joint_target() const;
  /// Marginal of the trailing block: N(mu_2, Sigma_22).
  TargetDensity marginal_tail_target() const;
  MvnParams tail_params() const;

  ConditionalSampler head_given_tail() const;

  /// Two-block systematic scan: head | tail then tail | head.
  std::vector<FullConditional> two_block_conditionals() const;

  TransitionKernel exact_marginal_kernel() const;  // iid N(mu_2, Sigma_22)
};

struct GaussianExperimentResult {
  ChainOutput gibbs;
  ChainOutput linchpin;
  AdaptationReport tuning;
};

/// Paired run on the 5-dimensional rho^|i-j| target with a scalar
/// trailing block: a two-block Gibbs sampler against the composition of
/// a pilot-tuned uniform-window MH kernel on the trailing coordinate
/// with the exact conditional for the rest. Both chains start from the
/// origin and share the state ordering (X1..X4, X5).
GaussianExperimentResult gaussian_experiment(double rho, int n, std::uint64_t seed,
                                             int pilot = 1000);

}  // namespace linchpin
