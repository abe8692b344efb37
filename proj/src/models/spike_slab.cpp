#include "linchpin/models/spike_slab.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "linchpin/distributions.hpp"

namespace linchpin {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

// Workspace for one inclusion vector: A = X^T X + D^{-1} factored, with
// the pieces the marginal, the conditional draw, and its density share.
struct ZWorkspace {
  Eigen::LLT<Eigen::MatrixXd> llt_a;
  double log_det_a = 0.0;
  double sum_log_tau = 0.0;        // log|D| = sum_i log tau_{Z_i}^2
  Eigen::VectorXd beta_mean;       // A^{-1} X^T y
  double quad = 0.0;               // y^T M^{-1} y
  int active = 0;
};

ZWorkspace build_workspace(const SpikeSlabData& data, const Eigen::VectorXd& z) {
  if (z.size() != data.p())
    throw std::domain_error("spike_slab: inclusion vector dimension mismatch");
  ZWorkspace ws;
  const int p = data.p();
  Eigen::MatrixXd a = data.X.transpose() * data.X;
  for (int i = 0; i < p; ++i) {
    const double zi = z[i];
    if (zi != 0.0 && zi != 1.0)
      throw std::domain_error("spike_slab: inclusion entries must be 0 or 1");
    const double tau_sq = zi == 1.0 ? data.tau1_sq : data.tau0_sq;
    a(i, i) += 1.0 / tau_sq;
    ws.sum_log_tau += std::log(tau_sq);
    ws.active += zi == 1.0 ? 1 : 0;
  }
  ws.llt_a.compute(a);
  if (ws.llt_a.info() != Eigen::Success)
    throw std::domain_error("spike_slab: conditional precision not positive-definite");
  ws.log_det_a =
      2.0 * Eigen::MatrixXd(ws.llt_a.matrixL()).diagonal().array().log().sum();
  const Eigen::VectorXd xty = data.X.transpose() * data.y;
  ws.beta_mean = ws.llt_a.solve(xty);
  ws.quad = data.y.squaredNorm() - xty.dot(ws.beta_mean);
  return ws;
}
}  // namespace

SpikeSlabData::SpikeSlabData(Eigen::VectorXd y_in, Eigen::MatrixXd X_in, double tau0_sq_in,
                             double tau1_sq_in, double q_in, double alpha1_in,
                             double alpha2_in)
    : y(std::move(y_in)), X(std::move(X_in)), tau0_sq(tau0_sq_in), tau1_sq(tau1_sq_in),
      q(q_in), alpha1(alpha1_in), alpha2(alpha2_in) {
  if (X.rows() != y.size()) throw std::domain_error("SpikeSlabData: X rows must match y");
  if (!(tau0_sq > 0.0) || !(tau1_sq > tau0_sq))
    throw std::domain_error("SpikeSlabData: requires 0 < tau0_sq < tau1_sq (slab wider)");
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("SpikeSlabData: q must lie in (0,1)");
  if (!(alpha1 > 0.0) || !(alpha2 > 0.0))
    throw std::domain_error("SpikeSlabData: alpha hyper-parameters must be positive");
}

double spike_slab_log_marginal_z(const SpikeSlabData& data, const Eigen::VectorXd& z) {
  const ZWorkspace ws = build_workspace(data, z);
  const double n_half = 0.5 * data.n();
  // log|I + X D X^T| = log|D| + log|A| with A = X^T X + D^{-1}
  const double log_det_m = ws.sum_log_tau + ws.log_det_a;
  const double log_prior_z = ws.active * std::log(data.q) +
                             (data.p() - ws.active) * std::log1p(-data.q);
  return log_prior_z - n_half * kLogTwoPi - 0.5 * log_det_m + data.alpha1 * std::log(data.alpha2) -
         std::lgamma(data.alpha1) + std::lgamma(data.alpha1 + n_half) -
         (data.alpha1 + n_half) * std::log(data.alpha2 + 0.5 * ws.quad);
}

double spike_slab_log_joint(const SpikeSlabData& data, const Eigen::VectorXd& beta,
                            double sigma_sq, const Eigen::VectorXd& z) {
  if (beta.size() != data.p())
    throw std::domain_error("spike_slab_log_joint: beta dimension mismatch");
  if (!(sigma_sq > 0.0)) return -std::numeric_limits<double>::infinity();
  const Eigen::VectorXd resid = data.y - data.X * beta;
  double value = -0.5 * data.n() * (kLogTwoPi + std::log(sigma_sq)) -
                 0.5 * resid.squaredNorm() / sigma_sq;
  for (int i = 0; i < data.p(); ++i) {
    const double tau_sq = z[i] == 1.0 ? data.tau1_sq : data.tau0_sq;
    value += normal_logpdf(beta[i], 0.0, sigma_sq * tau_sq);
    value += z[i] == 1.0 ? std::log(data.q) : std::log1p(-data.q);
  }
  return value + inverse_gamma_logpdf(sigma_sq, data.alpha1, data.alpha2);
}

BetaSigmaDraw spike_slab_conditional_draw(const SpikeSlabData& data,
                                          const Eigen::VectorXd& z, RandomStream& stream) {
  const ZWorkspace ws = build_workspace(data, z);
  BetaSigmaDraw draw;
  draw.sigma_sq = draw_inverse_gamma(stream, data.alpha1 + 0.5 * data.n(),
                                     data.alpha2 + 0.5 * ws.quad);
  // beta | sigma^2, Z, y ~ N(A^{-1} X^T y, sigma^2 A^{-1})
  Eigen::VectorXd noise(data.p());
  for (int i = 0; i < data.p(); ++i) noise[i] = stream.normal();
  const Eigen::MatrixXd factor = ws.llt_a.matrixL();
  draw.beta = ws.beta_mean + std::sqrt(draw.sigma_sq) *
                                 factor.transpose().triangularView<Eigen::Upper>().solve(noise);
  return draw;
}

double spike_slab_conditional_logpdf(const SpikeSlabData& data, const Eigen::VectorXd& beta,
                                     double sigma_sq, const Eigen::VectorXd& z) {
  if (!(sigma_sq > 0.0)) return -std::numeric_limits<double>::infinity();
  const ZWorkspace ws = build_workspace(data, z);
  const double sigma_logpdf = inverse_gamma_logpdf(
      sigma_sq, data.alpha1 + 0.5 * data.n(), data.alpha2 + 0.5 * ws.quad);
  const Eigen::VectorXd centered = beta - ws.beta_mean;
  const Eigen::VectorXd w = Eigen::MatrixXd(ws.llt_a.matrixL()).transpose() * centered;
  const double beta_logpdf = -0.5 * data.p() * (kLogTwoPi + std::log(sigma_sq)) +
                             0.5 * ws.log_det_a - 0.5 * w.squaredNorm() / sigma_sq;
  return sigma_logpdf + beta_logpdf;
}

SpikeSlabPosterior spike_slab_enumerate(const SpikeSlabData& data) {
  const int p = data.p();
  if (p > 12) throw std::domain_error("spike_slab_enumerate: p must be <= 12");
  const Eigen::Index count = Eigen::Index(1) << p;

  SpikeSlabPosterior posterior;
  posterior.log_weights.resize(static_cast<std::size_t>(count));
  double max_log = -std::numeric_limits<double>::infinity();
  for (Eigen::Index bits = 0; bits < count; ++bits) {
    const double lw = spike_slab_log_marginal_z(data, bits_to_state(bits, p));
    posterior.log_weights[static_cast<std::size_t>(bits)] = lw;
    max_log = std::max(max_log, lw);
  }
  posterior.probabilities.resize(count);
  for (Eigen::Index bits = 0; bits < count; ++bits)
    posterior.probabilities[bits] =
        std::exp(posterior.log_weights[static_cast<std::size_t>(bits)] - max_log);
  posterior.probabilities /= posterior.probabilities.sum();

  posterior.inclusion = Eigen::VectorXd::Zero(p);
  for (Eigen::Index bits = 0; bits < count; ++bits)
    for (int i = 0; i < p; ++i)
      if ((bits >> i) & 1) posterior.inclusion[i] += posterior.probabilities[bits];
  return posterior;
}

TargetDensity spike_slab_z_target(const SpikeSlabData& data) {
  TargetDensity target;
  target.dimension = data.p();
  target.kind = StateKind::BinaryVector;
  auto shared = std::make_shared<SpikeSlabData>(data);
  target.log_density = [shared](const Eigen::VectorXd& z) {
    return spike_slab_log_marginal_z(*shared, z);
  };
  return target;
}

ConditionalSampler spike_slab_bs_sampler(const SpikeSlabData& data) {
  ConditionalSampler sampler;
  sampler.x_dimension = data.p() + 1;  // (beta, sigma^2)
  auto shared = std::make_shared<SpikeSlabData>(data);
  sampler.draw = [shared](const Eigen::VectorXd& z, RandomStream& stream) {
    const BetaSigmaDraw draw = spike_slab_conditional_draw(*shared, z, stream);
    Eigen::VectorXd x(shared->p() + 1);
    x.head(shared->p()) = draw.beta;
    x[shared->p()] = draw.sigma_sq;
    return x;
  };
  sampler.log_density = [shared](const Eigen::VectorXd& x, const Eigen::VectorXd& z) {
    return spike_slab_conditional_logpdf(*shared, x.head(shared->p()), x[shared->p()], z);
  };
  return sampler;
}

SpikeSlabData synth_spike_slab(int n, int p, const std::vector<int>& active, double signal,
                               double sigma, std::uint64_t seed, double tau0_sq,
                               double tau1_sq, double q, double alpha1, double alpha2) {
  RandomStream stream(seed);
  Eigen::MatrixXd X(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = stream.normal();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (std::size_t idx = 0; idx < active.size(); ++idx) {
    if (active[idx] < 0 || active[idx] >= p)
      throw std::domain_error("synth_spike_slab: active index out of range");
    beta[active[idx]] = (idx % 2 == 0 ? 1.0 : -1.0) * signal;
  }
  Eigen::VectorXd y = X * beta;
  for (int i = 0; i < n; ++i) y[i] += sigma * stream.normal();
  return SpikeSlabData(std::move(y), std::move(X), tau0_sq, tau1_sq, q, alpha1, alpha2);
}

Eigen::VectorXd bits_to_state(Eigen::Index bits, int p) {
  Eigen::VectorXd z(p);
  for (int i = 0; i < p; ++i) z[i] = (bits >> i) & 1 ? 1.0 : 0.0;
  return z;
}

Eigen::Index state_to_bits(const Eigen::VectorXd& z) {
  Eigen::Index bits = 0;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (z[i] == 1.0) bits |= Eigen::Index(1) << i;
  return bits;
}

}  // namespace linchpin
