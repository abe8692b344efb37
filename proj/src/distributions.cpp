#include "linchpin/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace linchpin {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogTwoPi = 1.8378770664093454835606594728112;
}  // namespace

double draw_normal(RandomStream& stream, double mean, double variance) {
  if (!(variance > 0.0)) throw std::domain_error("draw_normal: variance must be positive");
  return mean + std::sqrt(variance) * stream.normal();
}

double draw_uniform(RandomStream& stream, double lo, double hi) {
  return stream.uniform(lo, hi);
}

// Marsaglia-Tsang squeeze for shape >= 1; shape < 1 boosted through
// G(shape) = G(shape + 1) * U^(1/shape).
double draw_gamma(RandomStream& stream, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw std::domain_error("draw_gamma: shape and rate must be positive");
  if (shape < 1.0) {
    double u = stream.uniform();
    while (u <= 0.0) u = stream.uniform();
    return draw_gamma(stream, shape + 1.0, rate) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = stream.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

double draw_inverse_gamma(RandomStream& stream, double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::domain_error("draw_inverse_gamma: shape and scale must be positive");
  return 1.0 / draw_gamma(stream, shape, scale);
}

double draw_chi_square(RandomStream& stream, double df) {
  if (!(df > 0.0)) throw std::domain_error("draw_chi_square: df must be positive");
  return draw_gamma(stream, 0.5 * df, 0.5);
}

bool draw_bernoulli(RandomStream& stream, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("draw_bernoulli: p must lie in [0,1]");
  return stream.uniform() < p;
}

double normal_logpdf(double x, double mean, double variance) {
  if (!(variance > 0.0)) throw std::domain_error("normal_logpdf: variance must be positive");
  const double z = x - mean;
  return -0.5 * (kLogTwoPi + std::log(variance)) - 0.5 * z * z / variance;
}

double uniform_logpdf(double x, double lo, double hi) {
  if (!(lo < hi)) throw std::domain_error("uniform_logpdf: requires lo < hi");
  if (x < lo || x > hi) return kNegInf;
  return -std::log(hi - lo);
}

double gamma_logpdf(double x, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw std::domain_error("gamma_logpdf: shape and rate must be positive");
  if (!(x > 0.0)) return kNegInf;
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double inverse_gamma_logpdf(double x, double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::domain_error("inverse_gamma_logpdf: shape and scale must be positive");
  if (!(x > 0.0)) return kNegInf;
  return shape * std::log(scale) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - scale / x;
}

double bernoulli_logpmf(int x, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("bernoulli_logpmf: p must lie in [0,1]");
  if (x == 1) return p > 0.0 ? std::log(p) : kNegInf;
  if (x == 0) return p < 1.0 ? std::log1p(-p) : kNegInf;
  return kNegInf;
}

// Acklam's piecewise rational approximation to the probit function.
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must lie in (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double q, r, x;
  if (p < p_low) {
    q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    q = p - 0.5;
    r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley refinement step.
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

MvnParams::MvnParams(Eigen::VectorXd mean_in, Eigen::MatrixXd covariance_in)
    : mean(std::move(mean_in)), covariance(std::move(covariance_in)) {
  const Eigen::Index d = mean.size();
  if (covariance.rows() != d || covariance.cols() != d)
    throw std::domain_error("MvnParams: covariance shape does not match mean");
  if (!covariance.isApprox(covariance.transpose(), 1e-10))
    throw std::domain_error("MvnParams: covariance is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("MvnParams: covariance is not positive-definite");
  factor = llt.matrixL();
  if ((factor.diagonal().array() <= 0.0).any())
    throw std::domain_error("MvnParams: factor diagonal not strictly positive");
  const double recon_err =
      (factor * factor.transpose() - covariance).cwiseAbs().maxCoeff();
  if (!(recon_err <= 1e-10 * std::max(1.0, covariance.cwiseAbs().maxCoeff())))
    throw std::domain_error("MvnParams: factorization residual too large");
}

Eigen::VectorXd draw_mvn(RandomStream& stream, const MvnParams& params) {
  Eigen::VectorXd z(params.dim());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = stream.normal();
  return params.mean + params.factor * z;
}

double mvn_logpdf(const Eigen::VectorXd& x, const MvnParams& params) {
  if (x.size() != params.dim()) throw std::domain_error("mvn_logpdf: dimension mismatch");
  const Eigen::VectorXd w =
      params.factor.triangularView<Eigen::Lower>().solve(x - params.mean);
  const double log_det_factor = params.factor.diagonal().array().log().sum();
  return -0.5 * static_cast<double>(params.dim()) * kLogTwoPi - log_det_factor -
         0.5 * w.squaredNorm();
}

}  // namespace linchpin
