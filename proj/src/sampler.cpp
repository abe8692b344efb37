#include "linchpin/sampler.hpp"

#include <chrono>
#include <stdexcept>

namespace linchpin {

namespace {
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}
}  // namespace

JointState linchpin_step(const LinchpinSampler& sampler, const JointState& state,
                         RandomStream& stream, bool* accepted) {
  StepResult marginal = sampler.marginal_kernel.step(state.y, stream);
  if (accepted) *accepted = marginal.accepted;
  Eigen::VectorXd x = sampler.conditional.draw(marginal.state, stream);
  if (x.size() != sampler.conditional.x_dimension)
    throw std::domain_error("linchpin_step: conditional draw dimension mismatch");
  return {std::move(x), std::move(marginal.state)};
}

ChainOutput run_chain(const LinchpinSampler& sampler, const JointState& init, int n,
                      RandomStream& stream) {
  if (n < 1) throw std::domain_error("run_chain: n must be >= 1");
  const auto t0 = Clock::now();
  const Eigen::Index dx = sampler.conditional.x_dimension;
  const Eigen::Index dy = sampler.marginal_kernel.dimension;
  if (init.y.size() != dy) throw std::domain_error("run_chain: initial y dimension mismatch");

  ChainOutput out;
  out.draws.resize(n, dx + dy);
  out.seed = stream.seed();
  out.kernel = "linchpin(" + sampler.marginal_kernel.name + ")";

  JointState state = init;
  for (int i = 0; i < n; ++i) {
    bool accepted = false;
    state = linchpin_step(sampler, state, stream, &accepted);
    out.draws.row(i).head(dx) = state.x;
    out.draws.row(i).tail(dy) = state.y;
    if (sampler.marginal_kernel.has_accept_step) {
      out.attempted += 1;
      out.accepted += accepted ? 1 : 0;
      out.accept_flags.push_back(accepted ? 1 : 0);
    }
  }
  out.wall_seconds = seconds_since(t0);
  return out;
}

ChainOutput run_kernel_chain(const TransitionKernel& kernel, const Eigen::VectorXd& init,
                             int n, RandomStream& stream) {
  if (n < 1) throw std::domain_error("run_kernel_chain: n must be >= 1");
  if (init.size() != kernel.dimension)
    throw std::domain_error("run_kernel_chain: initial state dimension mismatch");
  const auto t0 = Clock::now();

  ChainOutput out;
  out.draws.resize(n, kernel.dimension);
  out.seed = stream.seed();
  out.kernel = kernel.name;

  Eigen::VectorXd state = init;
  for (int i = 0; i < n; ++i) {
    StepResult result = kernel.step(state, stream);
    state = std::move(result.state);
    out.draws.row(i) = state;
    if (kernel.has_accept_step) {
      out.attempted += 1;
      out.accepted += result.accepted ? 1 : 0;
      out.accept_flags.push_back(result.accepted ? 1 : 0);
    }
  }
  out.wall_seconds = seconds_since(t0);
  return out;
}

ChainOutput run_marginal_then_fill(const LinchpinSampler& sampler, const Eigen::VectorXd& y0,
                                   int n, int thin, RandomStream& stream) {
  if (n < 1) throw std::domain_error("run_marginal_then_fill: n must be >= 1");
  if (thin < 1) throw std::domain_error("run_marginal_then_fill: thin must be >= 1");
  const auto t0 = Clock::now();
  const Eigen::Index dx = sampler.conditional.x_dimension;
  const Eigen::Index dy = sampler.marginal_kernel.dimension;

  const Eigen::Index kept = (static_cast<Eigen::Index>(n) + thin - 1) / thin;
  Eigen::MatrixXd retained_y(kept, dy);

  ChainOutput out;
  out.seed = stream.seed();
  out.kernel = "linchpin-deferred(" + sampler.marginal_kernel.name + ")";

  Eigen::VectorXd y = y0;
  Eigen::Index row = 0;
  for (int i = 0; i < n; ++i) {
    StepResult result = sampler.marginal_kernel.step(y, stream);
    y = std::move(result.state);
    if (sampler.marginal_kernel.has_accept_step) {
      out.attempted += 1;
      out.accepted += result.accepted ? 1 : 0;
    }
    if (i % thin == 0) {
      retained_y.row(row++) = y;
      if (sampler.marginal_kernel.has_accept_step)
        out.accept_flags.push_back(result.accepted ? 1 : 0);
    }
  }

  // Post-processing done, fill the conditional coordinates.
  out.draws.resize(kept, dx + dy);
  for (Eigen::Index i = 0; i < kept; ++i) {
    const Eigen::VectorXd yi = retained_y.row(i);
    out.draws.row(i).head(dx) = sampler.conditional.draw(yi, stream);
    out.draws.row(i).tail(dy) = yi;
  }
  out.wall_seconds = seconds_since(t0);
  return out;
}

}  // namespace linchpin
