#pragma once

#include <Eigen/Dense>

#include "linchpin/rng.hpp"

namespace linchpin {

// Univariate samplers. Parameterizations used throughout:
//   normal(mean, variance)
//   gamma(shape, rate)            density ~ x^(shape-1) exp(-rate x)
//   inverse_gamma(shape, scale)   density ~ x^(-shape-1) exp(-scale / x)
double draw_normal(RandomStream& stream, double mean, double variance);
double draw_uniform(RandomStream& stream, double lo, double hi);
double draw_gamma(RandomStream& stream, double shape, double rate);
double draw_inverse_gamma(RandomStream& stream, double shape, double scale);
double draw_chi_square(RandomStream& stream, double df);
bool draw_bernoulli(RandomStream& stream, double p);

// Exact log densities, normalizing constants included. Points outside the
// support return -infinity rather than throwing.
double normal_logpdf(double x, double mean, double variance);
double uniform_logpdf(double x, double lo, double hi);
double gamma_logpdf(double x, double shape, double rate);
double inverse_gamma_logpdf(double x, double shape, double scale);
double bernoulli_logpmf(int x, double p);

/// Standard normal quantile (Acklam's rational approximation, |rel err| < 2e-9).
double normal_quantile(double p);

/// Mean/covariance pair for a multivariate normal with the lower Cholesky
/// factor cached at construction, so draws cost one matrix-vector product.
/// Construction throws std::domain_error when the covariance is not
/// symmetric positive-definite.
struct MvnParams {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd factor;  // lower triangular, covariance = factor * factor^T

  MvnParams(Eigen::VectorXd mean_in, Eigen::MatrixXd covariance_in);

  Eigen::Index dim() const { return mean.size(); }
};

Eigen::VectorXd draw_mvn(RandomStream& stream, const MvnParams& params);
double mvn_logpdf(const Eigen::VectorXd& x, const MvnParams& params);

}  // namespace linchpin
