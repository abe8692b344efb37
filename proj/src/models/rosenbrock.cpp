#include "linchpin/models/rosenbrock.hpp"

#include "linchpin/distributions.hpp"

namespace linchpin {

double RosenbrockTarget::log_density(double x, double y) const {
  const double dev = displayed_form ? x - y : x - y * y;
  return -(100.0 * dev * dev + (1.0 - y) * (1.0 - y)) / 20.0;
}

TargetDensity RosenbrockTarget::joint_target() const {
  TargetDensity target;
  target.dimension = 2;
  target.log_density = [form = displayed_form](const Eigen::VectorXd& state) {
    RosenbrockTarget model{form};
    return model.log_density(state[0], state[1]);
  };
  return target;
}

TargetDensity RosenbrockTarget::marginal_target() const {
  TargetDensity target;
  target.dimension = 1;
  target.log_density = [](const Eigen::VectorXd& state) {
    return normal_logpdf(state[0], 1.0, 10.0);
  };
  return target;
}

ConditionalSampler RosenbrockTarget::conditional() const {
  ConditionalSampler sampler;
  sampler.x_dimension = 1;
  sampler.draw = [](const Eigen::VectorXd& y, RandomStream& stream) {
    Eigen::VectorXd x(1);
    x[0] = draw_normal(stream, y[0] * y[0], 0.1);
    return x;
  };
  sampler.log_density = [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return normal_logpdf(x[0], y[0] * y[0], 0.1);
  };
  return sampler;
}

std::pair<double, double> RosenbrockTarget::exact_draw(RandomStream& stream) const {
  const double y = draw_normal(stream, 1.0, 10.0);
  const double x = draw_normal(stream, y * y, 0.1);
  return {x, y};
}

TransitionKernel RosenbrockTarget::exact_marginal_kernel() const {
  TransitionKernel kernel;
  kernel.dimension = 1;
  kernel.name = "iid-marginal";
  kernel.has_accept_step = false;
  kernel.step = [](const Eigen::VectorXd&, RandomStream& stream) {
    Eigen::VectorXd y(1);
    y[0] = draw_normal(stream, 1.0, 10.0);
    return StepResult{std::move(y), true};
  };
  return kernel;
}

}  // namespace linchpin
