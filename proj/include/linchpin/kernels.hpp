#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "linchpin/distributions.hpp"
#include "linchpin/rng.hpp"
#include "linchpin/target.hpp"

namespace linchpin {

enum class ProposalKind { UniformWindow, Gaussian };

struct StepResult {
  Eigen::VectorXd state;
  bool accepted = true;
};

/// A single-step Markov kernel. `step` maps (state, stream) to the next
/// state and preserves dimension and state kind. Kernels are immutable
/// after construction; chain state and stream stay with the caller, so a
/// kernel may be shared across threads. `exact_matrix`, when set, builds
/// the kernel's transition matrix on an enumerated state space (rows sum
/// to 1 within 1e-12); only finite-state kernels provide it.
struct TransitionKernel {
  int dimension = 0;
  StateKind kind = StateKind::RealVector;
  std::string name;
  double scale = 0.0;           // proposal scale where meaningful
  bool has_accept_step = true;  // false for pure scan kernels (Gibbs)
  std::function<StepResult(const Eigen::VectorXd&, RandomStream&)> step;
  std::function<Eigen::MatrixXd()> exact_matrix;  // optional
};

/// One random-walk Metropolis-Hastings step. The proposal is symmetric
/// about the current state: each coordinate perturbed by Uniform(-h, h),
/// or by h times a standard normal. Acceptance probability is
/// min{1, f(proposal) / f(state)}; ties count as accepted and a rejected
/// step returns the input state unchanged.
StepResult rw_mh_step(const TargetDensity& target, const Eigen::VectorXd& state,
                      double h, ProposalKind proposal, RandomStream& stream);

TransitionKernel make_rw_mh_kernel(TargetDensity target, double h,
                                   ProposalKind proposal = ProposalKind::UniformWindow);

struct AdaptationReport {
  double scale = 1.0;            // frozen proposal scale after the pilot
  double acceptance_rate = 0.0;  // accepted / attempted over the pilot, exactly
  int pilot_length = 0;
  bool reached_target = true;    // realized rate within 0.1 of the target
};

/// Commonly used random-walk acceptance targets: 0.44 in one dimension,
/// 0.234 in five or more, linear in between.
double default_target_acceptance(int dimension);

/// Pilot-phase scale tuning: Robbins-Monro updates of log h toward the
/// target acceptance rate, run for `pilot_length` steps from `start`.
/// The returned scale is frozen; production chains built from it are
/// time-homogeneous. Failure to get within 0.1 of the target is reported,
/// not thrown.
AdaptationReport tune_scale(const TargetDensity& target, const Eigen::VectorXd& start,
                            int pilot_length, double target_acceptance,
                            RandomStream& stream, ProposalKind proposal = ProposalKind::UniformWindow,
                            double initial_scale = 1.0);

/// One block of a systematic-scan Gibbs sweep: the state coordinates it
/// owns and an exact draw from the block's full conditional given the
/// rest of the state.
struct FullConditional {
  std::vector<Eigen::Index> indices;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, RandomStream&)> draw;
};

/// Systematic scan over the blocks in order; every block must be covered
/// exactly once and each draw must return its block's dimension.
Eigen::VectorXd gibbs_scan_step(const std::vector<FullConditional>& conditionals,
                                Eigen::VectorXd state, RandomStream& stream);

TransitionKernel make_gibbs_kernel(std::vector<FullConditional> conditionals,
                                   int dimension, std::string name = "gibbs");

/// Gaussian conditional of the leading block given the trailing one,
/// with the gain and Schur-complement covariance precomputed once.
struct MvnConditional {
  Eigen::VectorXd head_mean;   // mean of the leading block
  Eigen::VectorXd tail_mean;   // mean of the conditioning block
  Eigen::MatrixXd gain;        // Sigma_12 Sigma_22^{-1}
  MvnParams base;              // conditional covariance, mean at tail_mean

  Eigen::VectorXd mean_at(const Eigen::VectorXd& tail_value) const;
  MvnParams at(const Eigen::VectorXd& tail_value) const;
  Eigen::VectorXd draw(const Eigen::VectorXd& tail_value, RandomStream& stream) const;
  double logpdf(const Eigen::VectorXd& head_value, const Eigen::VectorXd& tail_value) const;
};

/// Split a d-dimensional Gaussian into (head, tail) with tail of length
/// `tail_size`; returns the conditional law of head given tail.
MvnConditional mvn_conditional(const MvnParams& params, int tail_size);

/// Conditional parameters of the leading block given tail = tail_value.
MvnParams mvn_conditional(const MvnParams& params, int tail_size,
                          const Eigen::VectorXd& tail_value);

/// One single-flip Metropolis-Hastings step on a binary vector: pick a
/// coordinate uniformly, propose its flip, accept with the MH ratio.
StepResult flip_mh_step(const TargetDensity& target, const Eigen::VectorXd& state,
                        RandomStream& stream);

/// Flip-MH kernel; exposes the exact 2^p transition matrix for p <= 12.
TransitionKernel make_flip_mh_kernel(TargetDensity target);

}  // namespace linchpin
