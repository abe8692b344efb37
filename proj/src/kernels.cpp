#include "linchpin/kernels.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace linchpin {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool mh_accept(double log_ratio, RandomStream& stream) {
  if (log_ratio >= 0.0) return true;  // ties and uphill moves always accepted
  if (log_ratio == kNegInf) return false;
  double u = stream.uniform();
  while (u <= 0.0) u = stream.uniform();
  return std::log(u) < log_ratio;
}
}  // namespace

StepResult rw_mh_step(const TargetDensity& target, const Eigen::VectorXd& state,
                      double h, ProposalKind proposal, RandomStream& stream) {
  if (!(h > 0.0)) throw std::domain_error("rw_mh_step: proposal scale must be positive");
  if (state.size() != target.dimension)
    throw std::domain_error("rw_mh_step: state dimension mismatch");
  const double log_f_state = target(state);
  if (log_f_state == kNegInf)
    throw std::invalid_argument("rw_mh_step: start state has zero target density");

  Eigen::VectorXd candidate(state.size());
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    const double offset = proposal == ProposalKind::UniformWindow
                              ? stream.uniform(-h, h)
                              : h * stream.normal();
    candidate[i] = state[i] + offset;
  }
  if (mh_accept(target(candidate) - log_f_state, stream)) return {candidate, true};
  return {state, false};
}

TransitionKernel make_rw_mh_kernel(TargetDensity target, double h, ProposalKind proposal) {
  if (!(h > 0.0)) throw std::domain_error("make_rw_mh_kernel: scale must be positive");
  TransitionKernel kernel;
  kernel.dimension = target.dimension;
  kernel.kind = target.kind;
  kernel.name = proposal == ProposalKind::UniformWindow ? "rw-mh-uniform" : "rw-mh-gaussian";
  kernel.scale = h;
  kernel.step = [target = std::move(target), h, proposal](const Eigen::VectorXd& state,
                                                          RandomStream& stream) {
    return rw_mh_step(target, state, h, proposal, stream);
  };
  return kernel;
}

double default_target_acceptance(int dimension) {
  if (dimension <= 1) return 0.44;
  if (dimension >= 5) return 0.234;
  return 0.44 + (0.234 - 0.44) * (dimension - 1) / 4.0;
}

AdaptationReport tune_scale(const TargetDensity& target, const Eigen::VectorXd& start,
                            int pilot_length, double target_acceptance,
                            RandomStream& stream, ProposalKind proposal,
                            double initial_scale) {
  if (pilot_length < 100) throw std::domain_error("tune_scale: pilot length must be >= 100");
  if (!(target_acceptance > 0.0 && target_acceptance < 1.0))
    throw std::domain_error("tune_scale: target acceptance must lie in (0,1)");
  if (!(initial_scale > 0.0)) throw std::domain_error("tune_scale: initial scale must be positive");

  double log_h = std::log(initial_scale);
  Eigen::VectorXd state = start;
  long accepted = 0;
  for (int i = 0; i < pilot_length; ++i) {
    StepResult result = rw_mh_step(target, state, std::exp(log_h), proposal, stream);
    state = std::move(result.state);
    accepted += result.accepted ? 1 : 0;
    const double gain = std::pow(static_cast<double>(i + 1), -0.6);
    log_h += gain * ((result.accepted ? 1.0 : 0.0) - target_acceptance);
  }

  AdaptationReport report;
  report.scale = std::exp(log_h);
  report.acceptance_rate = static_cast<double>(accepted) / pilot_length;
  report.pilot_length = pilot_length;
  report.reached_target = std::abs(report.acceptance_rate - target_acceptance) <= 0.1;
  return report;
}

Eigen::VectorXd gibbs_scan_step(const std::vector<FullConditional>& conditionals,
                                Eigen::VectorXd state, RandomStream& stream) {
  std::vector<char> covered(static_cast<std::size_t>(state.size()), 0);
  for (const auto& block : conditionals) {
    for (Eigen::Index idx : block.indices) {
      if (idx < 0 || idx >= state.size())
        throw std::domain_error("gibbs_scan_step: block index out of range");
      if (covered[static_cast<std::size_t>(idx)]++)
        throw std::domain_error("gibbs_scan_step: coordinate covered twice");
    }
  }
  for (char c : covered)
    if (!c) throw std::domain_error("gibbs_scan_step: blocks do not cover the state");

  for (const auto& block : conditionals) {
    const Eigen::VectorXd draw = block.draw(state, stream);
    if (draw.size() != static_cast<Eigen::Index>(block.indices.size()))
      throw std::domain_error("gibbs_scan_step: block draw dimension mismatch");
    for (std::size_t j = 0; j < block.indices.size(); ++j)
      state[block.indices[j]] = draw[static_cast<Eigen::Index>(j)];
  }
  return state;
}

TransitionKernel make_gibbs_kernel(std::vector<FullConditional> conditionals,
                                   int dimension, std::string name) {
  TransitionKernel kernel;
  kernel.dimension = dimension;
  kernel.name = std::move(name);
  kernel.has_accept_step = false;
  kernel.step = [conditionals = std::move(conditionals)](const Eigen::VectorXd& state,
                                                         RandomStream& stream) {
    return StepResult{gibbs_scan_step(conditionals, state, stream), true};
  };
  return kernel;
}

MvnConditional mvn_conditional(const MvnParams& params, int tail_size) {
  const Eigen::Index p = params.dim();
  if (tail_size <= 0 || tail_size >= p)
    throw std::domain_error("mvn_conditional: split must satisfy 0 < r < p");
  const Eigen::Index head = p - tail_size;

  const Eigen::MatrixXd sigma11 = params.covariance.topLeftCorner(head, head);
  const Eigen::MatrixXd sigma12 = params.covariance.topRightCorner(head, tail_size);
  const Eigen::MatrixXd sigma22 = params.covariance.bottomRightCorner(tail_size, tail_size);

  Eigen::LLT<Eigen::MatrixXd> llt22(sigma22);
  if (llt22.info() != Eigen::Success)
    throw std::domain_error("mvn_conditional: conditioning block is singular");

  Eigen::MatrixXd gain = llt22.solve(sigma12.transpose()).transpose();
  Eigen::MatrixXd schur = sigma11 - gain * sigma12.transpose();
  schur = 0.5 * (schur + schur.transpose());  // symmetrize rounding noise

  Eigen::VectorXd head_mean = params.mean.head(head);
  Eigen::VectorXd tail_mean = params.mean.tail(tail_size);
  MvnParams base(head_mean, std::move(schur));
  return MvnConditional{std::move(head_mean), std::move(tail_mean), std::move(gain),
                        std::move(base)};
}

MvnParams mvn_conditional(const MvnParams& params, int tail_size,
                          const Eigen::VectorXd& tail_value) {
  return mvn_conditional(params, tail_size).at(tail_value);
}

Eigen::VectorXd MvnConditional::mean_at(const Eigen::VectorXd& tail_value) const {
  if (tail_value.size() != tail_mean.size())
    throw std::domain_error("MvnConditional: conditioning value dimension mismatch");
  return head_mean + gain * (tail_value - tail_mean);
}

MvnParams MvnConditional::at(const Eigen::VectorXd& tail_value) const {
  return MvnParams(mean_at(tail_value), base.covariance);
}

Eigen::VectorXd MvnConditional::draw(const Eigen::VectorXd& tail_value,
                                     RandomStream& stream) const {
  Eigen::VectorXd z(base.dim());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = stream.normal();
  return mean_at(tail_value) + base.factor * z;
}

double MvnConditional::logpdf(const Eigen::VectorXd& head_value,
                              const Eigen::VectorXd& tail_value) const {
  const Eigen::VectorXd w = base.factor.triangularView<Eigen::Lower>().solve(
      head_value - mean_at(tail_value));
  const double log_det_factor = base.factor.diagonal().array().log().sum();
  return -0.5 * static_cast<double>(base.dim()) * 1.8378770664093454836 - log_det_factor -
         0.5 * w.squaredNorm();
}

StepResult flip_mh_step(const TargetDensity& target, const Eigen::VectorXd& state,
                        RandomStream& stream) {
  if (state.size() != target.dimension)
    throw std::domain_error("flip_mh_step: state dimension mismatch");
  const Eigen::Index coord =
      static_cast<Eigen::Index>(stream.uniform() * static_cast<double>(state.size()));
  Eigen::VectorXd candidate = state;
  candidate[coord] = candidate[coord] == 0.0 ? 1.0 : 0.0;
  if (mh_accept(target(candidate) - target(state), stream)) return {candidate, true};
  return {state, false};
}

TransitionKernel make_flip_mh_kernel(TargetDensity target) {
  TransitionKernel kernel;
  kernel.dimension = target.dimension;
  kernel.kind = StateKind::BinaryVector;
  kernel.name = "flip-mh";
  const int p = target.dimension;
  auto shared = std::make_shared<TargetDensity>(std::move(target));
  kernel.step = [shared](const Eigen::VectorXd& state, RandomStream& stream) {
    return flip_mh_step(*shared, state, stream);
  };
  if (p <= 12) {
    kernel.exact_matrix = [shared, p]() {
      const Eigen::Index n = Eigen::Index(1) << p;
      Eigen::VectorXd logf(n);
      Eigen::VectorXd z(p);
      for (Eigen::Index s = 0; s < n; ++s) {
        for (int i = 0; i < p; ++i) z[i] = (s >> i) & 1 ? 1.0 : 0.0;
        logf[s] = (*shared)(z);
      }
      Eigen::MatrixXd matrix = Eigen::MatrixXd::Zero(n, n);
      for (Eigen::Index s = 0; s < n; ++s) {
        double stay = 1.0;
        for (int i = 0; i < p; ++i) {
          const Eigen::Index t = s ^ (Eigen::Index(1) << i);
          const double move =
              std::min(1.0, std::exp(logf[t] - logf[s])) / static_cast<double>(p);
          matrix(s, t) = move;
          stay -= move;
        }
        matrix(s, s) = stay;
      }
      return matrix;
    };
  }
  return kernel;
}

}  // namespace linchpin
