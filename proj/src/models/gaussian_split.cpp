#include "linchpin/models/gaussian_split.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "linchpin/distributions.hpp"

namespace linchpin {

Eigen::MatrixXd ar1_correlation(int p, double rho) {
  if (p < 1) throw std::domain_error("ar1_correlation: p must be >= 1");
  if (!(rho > -1.0 && rho < 1.0))
    throw std::domain_error("ar1_correlation: rho must lie in (-1, 1)");
  Eigen::MatrixXd sigma(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) sigma(i, j) = std::pow(rho, std::abs(i - j));
  return sigma;
}

GaussianSplitTarget::GaussianSplitTarget(Eigen::VectorXd mean, Eigen::MatrixXd covariance,
                                         int r)
    : params(std::move(mean), std::move(covariance)), split(r) {
  if (r <= 0 || r >= params.dim())
    throw std::domain_error("GaussianSplitTarget: split must satisfy 0 < r < p");
}

TargetDensity GaussianSplitTarget::joint_target() const {
  TargetDensity target;
  target.dimension = dim();
  target.log_density = [params = params](const Eigen::VectorXd& state) {
    return mvn_logpdf(state, params);
  };
  return target;
}

MvnParams GaussianSplitTarget::tail_params() const {
  return MvnParams(params.mean.tail(split),
                   params.covariance.bottomRightCorner(split, split));
}

TargetDensity GaussianSplitTarget::marginal_tail_target() const {
  TargetDensity target;
  target.dimension = split;
  target.log_density = [tail = tail_params()](const Eigen::VectorXd& state) {
    return mvn_logpdf(state, tail);
  };
  return target;
}

ConditionalSampler GaussianSplitTarget::head_given_tail() const {
  const int head = dim() - split;
  ConditionalSampler sampler;
  sampler.x_dimension = head;
  auto conditional = std::make_shared<MvnConditional>(mvn_conditional(params, split));
  sampler.draw = [conditional](const Eigen::VectorXd& y, RandomStream& stream) {
    return conditional->draw(y, stream);
  };
  sampler.log_density = [conditional](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return conditional->logpdf(x, y);
  };
  return sampler;
}

std::vector<FullConditional> GaussianSplitTarget::two_block_conditionals() const {
  const int p = dim();
  const int head = p - split;

  // head | tail reuses the linchpin conditional; tail | head comes from
  // the reversed coordinate ordering.
  auto head_cond = std::make_shared<MvnConditional>(mvn_conditional(params, split));

  Eigen::VectorXd rev_mean(p);
  rev_mean << params.mean.tail(split), params.mean.head(head);
  Eigen::MatrixXd rev_cov(p, p);
  rev_cov.topLeftCorner(split, split) = params.covariance.bottomRightCorner(split, split);
  rev_cov.topRightCorner(split, head) = params.covariance.bottomLeftCorner(split, head);
  rev_cov.bottomLeftCorner(head, split) = params.covariance.topRightCorner(head, split);
  rev_cov.bottomRightCorner(head, head) = params.covariance.topLeftCorner(head, head);
  auto tail_cond = std::make_shared<MvnConditional>(
      mvn_conditional(MvnParams(std::move(rev_mean), std::move(rev_cov)), head));

  FullConditional head_block;
  head_block.indices.resize(static_cast<std::size_t>(head));
  for (int i = 0; i < head; ++i) head_block.indices[static_cast<std::size_t>(i)] = i;
  head_block.draw = [head_cond, head, split = split](const Eigen::VectorXd& state,
                                                     RandomStream& stream) {
    return head_cond->draw(state.tail(split), stream);
  };

  FullConditional tail_block;
  tail_block.indices.resize(static_cast<std::size_t>(split));
  for (int i = 0; i < split; ++i)
    tail_block.indices[static_cast<std::size_t>(i)] = head + i;
  tail_block.draw = [tail_cond, head](const Eigen::VectorXd& state, RandomStream& stream) {
    return tail_cond->draw(state.head(head), stream);
  };

  return {std::move(head_block), std::move(tail_block)};
}

TransitionKernel GaussianSplitTarget::exact_marginal_kernel() const {
  TransitionKernel kernel;
  kernel.dimension = split;
  kernel.name = "iid-marginal";
  kernel.has_accept_step = false;
  kernel.step = [tail = tail_params()](const Eigen::VectorXd&, RandomStream& stream) {
    return StepResult{draw_mvn(stream, tail), true};
  };
  return kernel;
}

GaussianExperimentResult gaussian_experiment(double rho, int n, std::uint64_t seed,
                                             int pilot) {
  const int p = 5;
  const int r = 1;
  GaussianSplitTarget target(Eigen::VectorXd::Zero(p), ar1_correlation(p, rho), r);

  RandomStream root(seed);
  RandomStream gibbs_stream = root.substream(0);
  RandomStream pilot_stream = root.substream(1);
  RandomStream linchpin_stream = root.substream(2);

  GaussianExperimentResult result;

  TransitionKernel gibbs = make_gibbs_kernel(target.two_block_conditionals(), p);
  result.gibbs = run_kernel_chain(gibbs, Eigen::VectorXd::Zero(p), n, gibbs_stream);
  result.gibbs.component_names = {"x1", "x2", "x3", "x4", "x5"};

  const TargetDensity marginal = target.marginal_tail_target();
  result.tuning = tune_scale(marginal, Eigen::VectorXd::Zero(r), pilot,
                             default_target_acceptance(r), pilot_stream);

  LinchpinSampler sampler{
      make_rw_mh_kernel(marginal, result.tuning.scale, ProposalKind::UniformWindow),
      target.head_given_tail()};
  result.linchpin = run_chain(
      sampler, JointState{Eigen::VectorXd::Zero(p - r), Eigen::VectorXd::Zero(r)}, n,
      linchpin_stream);
  result.linchpin.component_names = {"x1", "x2", "x3", "x4", "x5"};
  return result;
}

}  // namespace linchpin
