#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace linchpin {

enum class StateKind { RealVector, BinaryVector };

/// Log unnormalized density over a real or binary vector state.
/// Evaluation must be pure: the same state always yields the same value.
/// Binary states are stored as real vectors with entries in {0, 1}.
struct TargetDensity {
  int dimension = 0;
  StateKind kind = StateKind::RealVector;
  std::function<double(const Eigen::VectorXd&)> log_density;

  double operator()(const Eigen::VectorXd& state) const { return log_density(state); }
};

}  // namespace linchpin
