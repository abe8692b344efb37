#pragma once

#include <cstdint>

#include "linchpin/sampler.hpp"
#include "linchpin/target.hpp"

namespace linchpin {

/// Two-variance Gaussian linear model
///   y | beta, u, lambda_e, lambda_r ~ N(X beta + Z u, lambda_e^{-1} I_n)
///   beta flat, u | lambda_r ~ N(0, lambda_r^{-1} I_k)
///   lambda_e ~ Gamma(e1, e2), lambda_r ~ Gamma(r1, r2)  (shape-rate).
/// With xi = (beta, u), the posterior factors into an exact Gaussian
/// conditional for xi given lambda and a two-dimensional marginal for
/// lambda = (lambda_e, lambda_r), which is the sampling target.
struct LinearModelData {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;  // n x p, full column rank
  Eigen::MatrixXd Z;  // n x k, full column rank
  double e1 = 1.0, e2 = 1.0, r1 = 1.0, r2 = 1.0;

  LinearModelData(Eigen::VectorXd y_in, Eigen::MatrixXd X_in, Eigen::MatrixXd Z_in,
                  double e1_in = 1.0, double e2_in = 1.0, double r1_in = 1.0,
                  double r2_in = 1.0);

  int n() const { return static_cast<int>(y.size()); }
  int p() const { return static_cast<int>(X.cols()); }
  int k() const { return static_cast<int>(Z.cols()); }
  Eigen::MatrixXd design() const;  // W = [X Z]
};

/// Gaussian conditional of xi = (beta, u) given lambda: precision
/// lambda_e W^T W + blockdiag(0_p, lambda_r I_k) with mean solving
/// precision * mean = lambda_e W^T y.
struct LinmodXiConditional {
  Eigen::VectorXd mean;
  Eigen::MatrixXd precision_factor;  // lower L, precision = L L^T
  double log_det_precision = 0.0;

  Eigen::VectorXd draw(RandomStream& stream) const;
  double logpdf(const Eigen::VectorXd& xi) const;
};

LinmodXiConditional linmod_xi_conditional(const LinearModelData& data, double lambda_e,
                                          double lambda_r);

/// Log Gamma priors of lambda (unnormalized part of the marginal).
double linmod_lambda_log_prior(const LinearModelData& data, double lambda_e,
                               double lambda_r);

/// Unnormalized log marginal posterior of lambda with xi integrated out:
///   (n/2) log lambda_e + (k/2) log lambda_r - (1/2) log|Q(lambda)|
///   - (1/2)(lambda_e y^T y - m^T Q m) + log priors,
/// where Q is the xi-precision and m its conditional mean. Outside the
/// positive orthant the value is -infinity.
double linmod_log_marginal_lambda(const LinearModelData& data, double lambda_e,
                                  double lambda_r);

/// Unnormalized log joint posterior of (xi, lambda); the factorization
/// check against conditional + marginal pins the derivation down.
double linmod_log_joint(const LinearModelData& data, const Eigen::VectorXd& xi,
                        double lambda_e, double lambda_r);

TargetDensity linmod_lambda_target(const LinearModelData& data);
ConditionalSampler linmod_xi_sampler(const LinearModelData& data);

/// Dataset simulated from the model's own likelihood at the given
/// parameters; deterministic in the seed.
LinearModelData synth_linear_model(int n, int p, int k, double lambda_e, double lambda_r,
                                   const Eigen::VectorXd& beta, std::uint64_t seed,
                                   double e1 = 1.0, double e2 = 1.0, double r1 = 1.0,
                                   double r2 = 1.0);

}  // namespace linchpin
