#include "linchpin/models/linear_model.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "linchpin/distributions.hpp"

namespace linchpin {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

void require_full_rank(const Eigen::MatrixXd& m, const char* what) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv.size() == 0 || sv[sv.size() - 1] <= 1e-10 * sv[0])
    throw std::domain_error(std::string(what) + ": matrix is rank deficient");
}
}  // namespace

LinearModelData::LinearModelData(Eigen::VectorXd y_in, Eigen::MatrixXd X_in,
                                 Eigen::MatrixXd Z_in, double e1_in, double e2_in,
                                 double r1_in, double r2_in)
    : y(std::move(y_in)), X(std::move(X_in)), Z(std::move(Z_in)), e1(e1_in), e2(e2_in),
      r1(r1_in), r2(r2_in) {
  if (X.rows() != y.size() || Z.rows() != y.size())
    throw std::domain_error("LinearModelData: design row counts must match y");
  if (std::max(X.cols(), Z.cols()) >= y.size())
    throw std::domain_error("LinearModelData: requires max{p, k} < n");
  if (!(e1 > 0 && e2 > 0 && r1 > 0 && r2 > 0))
    throw std::domain_error("LinearModelData: hyper-parameters must be positive");
  require_full_rank(X, "LinearModelData X");
  require_full_rank(Z, "LinearModelData Z");
}

Eigen::MatrixXd LinearModelData::design() const {
  Eigen::MatrixXd w(n(), p() + k());
  w << X, Z;
  return w;
}

LinmodXiConditional linmod_xi_conditional(const LinearModelData& data, double lambda_e,
                                          double lambda_r) {
  if (!(lambda_e > 0.0) || !(lambda_r > 0.0))
    throw std::domain_error("linmod_xi_conditional: lambda must be positive");
  const Eigen::MatrixXd w = data.design();
  const int k = data.k();

  Eigen::MatrixXd precision = lambda_e * (w.transpose() * w);
  precision.bottomRightCorner(k, k) += lambda_r * Eigen::MatrixXd::Identity(k, k);

  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("linmod_xi_conditional: singular precision (flat direction)");

  LinmodXiConditional cond;
  cond.mean = llt.solve(lambda_e * (w.transpose() * data.y));
  cond.precision_factor = llt.matrixL();
  cond.log_det_precision = 2.0 * cond.precision_factor.diagonal().array().log().sum();
  return cond;
}

Eigen::VectorXd LinmodXiConditional::draw(RandomStream& stream) const {
  // xi = mean + L^{-T} z gives covariance (L L^T)^{-1}.
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = stream.normal();
  return mean + precision_factor.transpose()
                    .triangularView<Eigen::Upper>()
                    .solve(z);
}

double LinmodXiConditional::logpdf(const Eigen::VectorXd& xi) const {
  const Eigen::VectorXd w = precision_factor.transpose() * (xi - mean);
  return -0.5 * static_cast<double>(mean.size()) * kLogTwoPi + 0.5 * log_det_precision -
         0.5 * w.squaredNorm();
}

double linmod_lambda_log_prior(const LinearModelData& data, double lambda_e,
                               double lambda_r) {
  if (!(lambda_e > 0.0) || !(lambda_r > 0.0)) return kNegInf;
  return gamma_logpdf(lambda_e, data.e1, data.e2) +
         gamma_logpdf(lambda_r, data.r1, data.r2);
}

double linmod_log_marginal_lambda(const LinearModelData& data, double lambda_e,
                                  double lambda_r) {
  if (!(lambda_e > 0.0) || !(lambda_r > 0.0)) return kNegInf;
  const LinmodXiConditional cond = linmod_xi_conditional(data, lambda_e, lambda_r);
  const Eigen::VectorXd lm = cond.precision_factor.transpose() * cond.mean;
  const double quad = lambda_e * data.y.squaredNorm() - lm.squaredNorm();  // = m^T Q m term
  return 0.5 * data.n() * std::log(lambda_e) + 0.5 * data.k() * std::log(lambda_r) -
         0.5 * cond.log_det_precision - 0.5 * quad +
         linmod_lambda_log_prior(data, lambda_e, lambda_r);
}

double linmod_log_joint(const LinearModelData& data, const Eigen::VectorXd& xi,
                        double lambda_e, double lambda_r) {
  if (!(lambda_e > 0.0) || !(lambda_r > 0.0)) return kNegInf;
  if (xi.size() != data.p() + data.k())
    throw std::domain_error("linmod_log_joint: xi dimension mismatch");
  const Eigen::VectorXd resid = data.y - data.design() * xi;
  const Eigen::VectorXd u = xi.tail(data.k());
  const double loglik =
      0.5 * data.n() * (std::log(lambda_e) - kLogTwoPi) - 0.5 * lambda_e * resid.squaredNorm();
  const double log_u_prior =
      0.5 * data.k() * (std::log(lambda_r) - kLogTwoPi) - 0.5 * lambda_r * u.squaredNorm();
  return loglik + log_u_prior + linmod_lambda_log_prior(data, lambda_e, lambda_r);
}

TargetDensity linmod_lambda_target(const LinearModelData& data) {
  TargetDensity target;
  target.dimension = 2;
  target.log_density = [data](const Eigen::VectorXd& lambda) {
    return linmod_log_marginal_lambda(data, lambda[0], lambda[1]);
  };
  return target;
}

ConditionalSampler linmod_xi_sampler(const LinearModelData& data) {
  ConditionalSampler sampler;
  sampler.x_dimension = data.p() + data.k();
  auto shared = std::make_shared<LinearModelData>(data);
  sampler.draw = [shared](const Eigen::VectorXd& lambda, RandomStream& stream) {
    return linmod_xi_conditional(*shared, lambda[0], lambda[1]).draw(stream);
  };
  sampler.log_density = [shared](const Eigen::VectorXd& xi, const Eigen::VectorXd& lambda) {
    return linmod_xi_conditional(*shared, lambda[0], lambda[1]).logpdf(xi);
  };
  return sampler;
}

LinearModelData synth_linear_model(int n, int p, int k, double lambda_e, double lambda_r,
                                   const Eigen::VectorXd& beta, std::uint64_t seed,
                                   double e1, double e2, double r1, double r2) {
  if (beta.size() != p) throw std::domain_error("synth_linear_model: beta size mismatch");
  if (!(lambda_e > 0.0) || !(lambda_r > 0.0))
    throw std::domain_error("synth_linear_model: lambda must be positive");
  RandomStream stream(seed);
  Eigen::MatrixXd X(n, p), Z(n, k);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) X(i, j) = stream.normal();
    for (int j = 0; j < k; ++j) Z(i, j) = stream.normal();
  }
  Eigen::VectorXd u(k);
  for (int j = 0; j < k; ++j) u[j] = stream.normal() / std::sqrt(lambda_r);
  Eigen::VectorXd y = X * beta + Z * u;
  for (int i = 0; i < n; ++i) y[i] += stream.normal() / std::sqrt(lambda_e);
  return LinearModelData(std::move(y), std::move(X), std::move(Z), e1, e2, r1, r2);
}

}  // namespace linchpin
