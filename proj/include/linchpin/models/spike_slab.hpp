#pragma once

#include <cstdint>
#include <vector>

#include "linchpin/sampler.hpp"
#include "linchpin/target.hpp"

namespace linchpin {

/// Gaussian variable-selection model with a two-point variance mixture:
///   y | beta, sigma^2 ~ N(X beta, sigma^2 I_n)
///   beta_i | sigma^2, Z_i ~ N(0, sigma^2 tau_{Z_i}^2),  P(Z_i = 1) = q
///   sigma^2 ~ InverseGamma(alpha1, alpha2).
/// Both beta and sigma^2 integrate out in closed form, leaving an exact
/// unnormalized posterior over the binary inclusion vector Z; (beta,
/// sigma^2) given Z is sampleable exactly, so Z is the natural chain
/// coordinate.
struct SpikeSlabData {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;  // n x p
  double tau0_sq = 0.01;  // spike variance multiplier
  double tau1_sq = 10.0;  // slab variance multiplier
  double q = 0.1;         // prior inclusion probability
  double alpha1 = 1.0, alpha2 = 1.0;

  SpikeSlabData(Eigen::VectorXd y_in, Eigen::MatrixXd X_in, double tau0_sq_in = 0.01,
                double tau1_sq_in = 10.0, double q_in = 0.1, double alpha1_in = 1.0,
                double alpha2_in = 1.0);

  int n() const { return static_cast<int>(y.size()); }
  int p() const { return static_cast<int>(X.cols()); }
};

/// Unnormalized log f(Z | y): the Bernoulli prior mass of Z plus the
/// marginal likelihood with beta and sigma^2 integrated analytically.
double spike_slab_log_marginal_z(const SpikeSlabData& data, const Eigen::VectorXd& z);

/// Unnormalized log joint posterior of (beta, sigma^2, Z).
double spike_slab_log_joint(const SpikeSlabData& data, const Eigen::VectorXd& beta,
                            double sigma_sq, const Eigen::VectorXd& z);

struct BetaSigmaDraw {
  Eigen::VectorXd beta;
  double sigma_sq = 1.0;
};

/// Exact draw from (beta, sigma^2) | Z, y: sigma^2 from its inverse-gamma
/// conditional, then beta Gaussian given sigma^2.
BetaSigmaDraw spike_slab_conditional_draw(const SpikeSlabData& data,
                                          const Eigen::VectorXd& z, RandomStream& stream);

double spike_slab_conditional_logpdf(const SpikeSlabData& data, const Eigen::VectorXd& beta,
                                     double sigma_sq, const Eigen::VectorXd& z);

struct SpikeSlabPosterior {
  std::vector<double> log_weights;   // unnormalized, indexed by bitmask
  Eigen::VectorXd probabilities;     // normalized, sums to 1
  Eigen::VectorXd inclusion;         // P(Z_i = 1 | y)
};

/// Exact posterior over all 2^p inclusion vectors; p <= 12.
SpikeSlabPosterior spike_slab_enumerate(const SpikeSlabData& data);

/// Binary target over Z for flip-MH chains.
TargetDensity spike_slab_z_target(const SpikeSlabData& data);

/// Conditional sampler filling x = (beta, sigma^2) given y-coordinate Z.
ConditionalSampler spike_slab_bs_sampler(const SpikeSlabData& data);

/// Synthetic dataset: X iid standard normal, active coefficients at
/// +-signal, noise sd sigma. Deterministic in the seed.
SpikeSlabData synth_spike_slab(int n, int p, const std::vector<int>& active, double signal,
                               double sigma, std::uint64_t seed, double tau0_sq = 0.01,
                               double tau1_sq = 10.0, double q = 0.1, double alpha1 = 1.0,
                               double alpha2 = 1.0);

/// State index <-> binary vector helpers shared by the enumeration and
/// the exact-chain validators (bit i of the index is coordinate i).
Eigen::VectorXd bits_to_state(Eigen::Index bits, int p);
Eigen::Index state_to_bits(const Eigen::VectorXd& z);

}  // namespace linchpin
