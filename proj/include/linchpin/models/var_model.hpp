#pragma once

#include <cstdint>

#include "linchpin/sampler.hpp"
#include "linchpin/target.hpp"

namespace linchpin {

/// Bayesian vector autoregression with exogenous predictors:
///   Y_t = sum_{i=1..q} A_i^T Y_{t-i} + B^T X_t + eps_t,  eps_t ~ N(0, Sigma)
/// with Y_t in R^r, X_t in R^p, coefficient blocks A_i and B (p x r), and
/// independent priors
///   vec(A) ~ N(m, C^{-1})   (C acts as a precision),
///   f(Sigma) ~ det(Sigma)^{-a/2} etr(-D Sigma^{-1} / 2),
///   f(B) ~ 1.
/// The likelihood conditions on the first q observations. The coefficient
/// stack is A = [A_1; ...; A_q] (qr x r, block i holding A_i), and m, C
/// refer to the column-major vec of that stack.
///
/// Integrating B out leaves closed-form conditionals for Sigma | A and
/// A | Sigma, so the chain can advance (A, Sigma) marginally and refresh
/// B from its exact matrix-normal conditional afterwards; the step never
/// reads the current B.
struct VarModelData {
  Eigen::MatrixXd Y;  // K x r, row t is Y_t^T
  Eigen::MatrixXd X;  // K x p, row t is X_t^T
  int lag = 1;        // q
  Eigen::VectorXd m;  // qr^2 prior mean of vec(A)
  Eigen::MatrixXd C;  // qr^2 x qr^2 prior precision of vec(A)
  Eigen::MatrixXd D;  // r x r prior scale for Sigma
  double a = 0.0;     // determinant exponent; default r + 2 supplied by make

  VarModelData(Eigen::MatrixXd Y_in, Eigen::MatrixXd X_in, int lag_in, Eigen::VectorXd m_in,
               Eigen::MatrixXd C_in, Eigen::MatrixXd D_in, double a_in);

  int K() const { return static_cast<int>(Y.rows()); }
  int r() const { return static_cast<int>(Y.cols()); }
  int p() const { return static_cast<int>(X.cols()); }
  int effective() const { return K() - lag; }  // usable observations

  // Regression blocks over t = lag+1 .. K.
  Eigen::MatrixXd effective_response() const;  // T x r
  Eigen::MatrixXd lagged_design() const;       // T x qr, row t = [Y_{t-1}^T ... Y_{t-q}^T]
  Eigen::MatrixXd exog_design() const;         // T x p
};

/// Default-prior constructor: m = 0, C = I, D = I, a = r + 2.
VarModelData make_var_data(Eigen::MatrixXd Y, Eigen::MatrixXd X, int lag);

struct VarState {
  Eigen::MatrixXd A;      // qr x r coefficient stack [A_1; ...; A_q]
  Eigen::MatrixXd B;      // p x r
  Eigen::MatrixXd Sigma;  // r x r PD
};

/// Unnormalized log posterior of (A, B, Sigma); -infinity off the PD cone.
double var_log_joint(const VarModelData& data, const VarState& state);

/// Unnormalized log posterior of (A, Sigma) with B integrated out.
double var_log_marginal_a_sigma(const VarModelData& data, const Eigen::MatrixXd& A,
                                const Eigen::MatrixXd& Sigma);

// The three conditional draws composing the collapsed sweep. The first
// two integrate B out; the third is the exact matrix-normal refresh.
Eigen::MatrixXd var_draw_sigma(const VarModelData& data, const Eigen::MatrixXd& A,
                               RandomStream& stream);
Eigen::MatrixXd var_draw_coefficients(const VarModelData& data, const Eigen::MatrixXd& Sigma,
                                      RandomStream& stream);
Eigen::MatrixXd var_draw_exog(const VarModelData& data, const Eigen::MatrixXd& A,
                              const Eigen::MatrixXd& Sigma, RandomStream& stream);

/// One collapsed sweep: Sigma' ~ f(Sigma | A, data), A' ~ f(A | Sigma',
/// data), B' ~ f(B | A', Sigma', data). Only (A, Sigma) of the current
/// state is read. Numerical PD failures are repaired by a 1e-10 jitter on
/// the diagonal with a warning on stderr.
VarState var_collapsed_step(const VarModelData& data, const VarState& state,
                            RandomStream& stream);

// Flat packing for generic kernels: [vec(A), vec(B), lower vech(Sigma)].
int var_packed_size(const VarModelData& data);
Eigen::VectorXd pack_var_state(const VarModelData& data, const VarState& state);
VarState unpack_var_state(const VarModelData& data, const Eigen::VectorXd& packed);
TargetDensity var_joint_target(const VarModelData& data);

/// Simulate K observations from the model at the given parameters with
/// X_t iid standard normal and Y_1..Y_q = 0; deterministic in the seed.
VarModelData synth_var(int r, int p, int lag, int K, const VarState& truth,
                       std::uint64_t seed);

}  // namespace linchpin
