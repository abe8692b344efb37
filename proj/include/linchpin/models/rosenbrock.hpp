#pragma once

#include <utility>

#include "linchpin/sampler.hpp"
#include "linchpin/target.hpp"

namespace linchpin {

/// Two-dimensional banana-shaped toy target with an exactly sampleable
/// factorization: Y ~ N(1, 10) and X | Y = y ~ N(y^2, 1/10).
///
/// The default joint log density is
///     -(1/20) [100 (x - y^2)^2 + (1 - y)^2],
/// the form consistent with that conditional/marginal pair. The variant
/// with (x - y)^2 in place of (x - y^2)^2 circulates as well but has a
/// different conditional; it is available behind `displayed_form` for
/// comparison and is not the default.
struct RosenbrockTarget {
  bool displayed_form = false;

  double log_density(double x, double y) const;

  // Joint states are ordered (x, y).
  TargetDensity joint_target() const;
  TargetDensity marginal_target() const;  // y alone: N(1, 10)

  ConditionalSampler conditional() const;  // x | y: N(y^2, 1/10)
  std::pair<double, double> exact_draw(RandomStream& stream) const;

  /// Marginal kernel producing exact iid N(1, 10) draws, so composing it
  /// with the conditional reproduces exact joint sampling.
  TransitionKernel exact_marginal_kernel() const;
};

}  // namespace linchpin
