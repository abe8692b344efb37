#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "linchpin/chain.hpp"
#include "linchpin/kernels.hpp"
#include "linchpin/rng.hpp"

namespace linchpin {

/// Exact conditional sampler for X given Y, with matching log density.
/// `draw` and `log_density` must describe the same law: histograms of
/// draws at fixed y agree with exp(log_density(., y)).
struct ConditionalSampler {
  int x_dimension = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd& y, RandomStream&)> draw;
  std::function<double(const Eigen::VectorXd& x, const Eigen::VectorXd& y)> log_density;
};

/// Composition of a marginal kernel on Y with an exact conditional for
/// X given Y. One step advances Y by the kernel, then replaces X with a
/// fresh conditional draw; the previous X plays no role, so the joint
/// chain inherits the marginal chain's invariance, reversibility, and
/// convergence rate.
struct LinchpinSampler {
  TransitionKernel marginal_kernel;  // on y
  ConditionalSampler conditional;    // x | y
};

struct JointState {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

JointState linchpin_step(const LinchpinSampler& sampler, const JointState& state,
                         RandomStream& stream, bool* accepted = nullptr);

/// Run n composed steps from `init`, recording rows (x, y) and the
/// marginal kernel's acceptance counts.
ChainOutput run_chain(const LinchpinSampler& sampler, const JointState& init, int n,
                      RandomStream& stream);

/// Generic chain driver for a bare kernel (Gibbs scans, joint MH, ...).
ChainOutput run_kernel_chain(const TransitionKernel& kernel, const Eigen::VectorXd& init,
                             int n, RandomStream& stream);

/// Deferred conditional filling: advance the Y-chain alone for n steps,
/// retain y at steps 0, thin, 2*thin, ... and only then draw one X per
/// retained y. Exactly ceil(n / thin) conditional draws are performed;
/// the retained (x, y) rows have the same law as thinning a full run.
ChainOutput run_marginal_then_fill(const LinchpinSampler& sampler, const Eigen::VectorXd& y0,
                                   int n, int thin, RandomStream& stream);

}  // namespace linchpin
