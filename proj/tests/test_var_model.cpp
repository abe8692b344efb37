#include "doctest.h"

#include <cmath>
#include <vector>

#include "linchpin/diagnostics.hpp"
#include "linchpin/kernels.hpp"
#include "linchpin/models/var_model.hpp"
#include "linchpin/sampler.hpp"
#include "support/stats.hpp"

using namespace linchpin;

namespace {

VarState default_truth(int r, int p, int lag) {
  VarState truth;
  truth.A = Eigen::MatrixXd::Zero(lag * r, r);
  truth.A.topLeftCorner(r, r) = 0.5 * Eigen::MatrixXd::Identity(r, r);
  truth.B = Eigen::MatrixXd::Constant(p, r, 1.0);
  truth.Sigma = Eigen::MatrixXd::Identity(r, r);
  if (r == 2) truth.Sigma(0, 1) = truth.Sigma(1, 0) = 0.3;
  return truth;
}

// log matrix-normal density of B around the regression solve, written
// from scratch as the oracle for the factorization identity.
double conditional_b_logpdf(const VarModelData& data, const VarState& state) {
  const Eigen::MatrixXd Xe = data.exog_design();
  const Eigen::MatrixXd xtx = Xe.transpose() * Xe;
  const Eigen::MatrixXd E =
      data.effective_response() - data.lagged_design() * state.A;
  const Eigen::MatrixXd b_hat = xtx.inverse() * Xe.transpose() * E;
  const Eigen::MatrixXd sigma_inv = state.Sigma.inverse();
  const Eigen::MatrixXd centered = state.B - b_hat;
  const int p = data.p(), r = data.r();
  return -0.5 * p * r * std::log(2.0 * M_PI) - 0.5 * p * std::log(state.Sigma.determinant()) +
         0.5 * r * std::log(xtx.determinant()) -
         0.5 * (sigma_inv * centered.transpose() * xtx * centered).trace();
}

// inverse-Wishart log density with scale Psi and the determinant
// exponent implied by the model, again written independently.
double sigma_conditional_logpdf(const VarModelData& data, const Eigen::MatrixXd& A,
                                const Eigen::MatrixXd& Sigma) {
  const Eigen::MatrixXd Xe = data.exog_design();
  const Eigen::MatrixXd E = data.effective_response() - data.lagged_design() * A;
  const Eigen::MatrixXd xtx = Xe.transpose() * Xe;
  const Eigen::MatrixXd s =
      E.transpose() * E -
      (Xe.transpose() * E).transpose() * xtx.inverse() * (Xe.transpose() * E);
  const Eigen::MatrixXd psi = data.D + s;
  const double exponent = data.effective() - data.p() + data.a;
  return -0.5 * exponent * std::log(Sigma.determinant()) -
         0.5 * (psi * Sigma.inverse()).trace();
}

}  // namespace

TEST_CASE("log joint at the all-zero configuration") {
  const int K = 10, r = 2, p = 1, lag = 1;
  VarModelData data = make_var_data(Eigen::MatrixXd::Zero(K, r), Eigen::MatrixXd::Zero(K, p), lag);
  VarState state;
  state.A = Eigen::MatrixXd::Zero(lag * r, r);
  state.B = Eigen::MatrixXd::Zero(p, r);
  state.Sigma = Eigen::MatrixXd::Identity(r, r);
  // likelihood: (K - q) r standard normals at zero; priors: A-quadratic
  // vanishes, Sigma prior contributes -tr(D)/2 = -1 at the identity
  const double expected = -0.5 * (K - lag) * r * std::log(2.0 * M_PI) - 1.0;
  CHECK(var_log_joint(data, state) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("coefficient prior is the quadratic form around m") {
  // zero data makes the likelihood flat in A, isolating the prior term
  const int K = 6, r = 2, p = 1, lag = 1;
  VarModelData data = make_var_data(Eigen::MatrixXd::Zero(K, r), Eigen::MatrixXd::Zero(K, p), lag);
  RandomStream stream(121);
  Eigen::VectorXd m(4);
  m << 0.3, -0.7, 1.1, 0.4;
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(4, 4);
  c(0, 1) = c(1, 0) = 0.4;
  c(2, 3) = c(3, 2) = -0.2;
  data.m = m;
  data.C = c;

  VarState at_mean;
  at_mean.A = Eigen::Map<const Eigen::MatrixXd>(m.data(), 2, 2);
  at_mean.B = Eigen::MatrixXd::Zero(p, r);
  at_mean.Sigma = Eigen::MatrixXd::Identity(r, r);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd delta(4);
    for (int i = 0; i < 4; ++i) delta[i] = stream.normal();
    VarState off = at_mean;
    off.A = Eigen::Map<const Eigen::MatrixXd>((m + delta).eval().data(), 2, 2);
    const double drop = var_log_joint(data, at_mean) - var_log_joint(data, off);
    CHECK(drop == doctest::Approx(0.5 * delta.dot(c * delta)).epsilon(1e-10));
  }
}

TEST_CASE("non-positive-definite covariance states are rejected as -inf") {
  const VarModelData data =
      synth_var(2, 1, 1, 20, default_truth(2, 1, 1), 122);
  VarState state = default_truth(2, 1, 1);
  state.Sigma << 1.0, 2.0, 2.0, 1.0;  // indefinite
  CHECK(var_log_joint(data, state) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("joint splits into the B-conditional times the collapsed posterior") {
  const VarModelData data = synth_var(2, 1, 1, 30, default_truth(2, 1, 1), 123);
  RandomStream stream(124);
  double reference = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    VarState state;
    state.A = Eigen::MatrixXd::NullaryExpr(2, 2, [&]() { return 0.5 * stream.normal(); });
    state.B = Eigen::MatrixXd::NullaryExpr(1, 2, [&]() { return stream.normal(); });
    Eigen::MatrixXd g = Eigen::MatrixXd::NullaryExpr(2, 2, [&]() { return stream.normal(); });
    state.Sigma = g * g.transpose() + 0.5 * Eigen::MatrixXd::Identity(2, 2);
    const double gap = var_log_joint(data, state) - conditional_b_logpdf(data, state) -
                       var_log_marginal_a_sigma(data, state.A, state.Sigma);
    if (trial == 0) reference = gap;
    CHECK(gap == doctest::Approx(reference).epsilon(1e-8));
  }
}

TEST_CASE("collapsed posterior factors through the inverse-Wishart conditional") {
  const VarModelData data = synth_var(2, 1, 1, 30, default_truth(2, 1, 1), 125);
  RandomStream stream(126);
  const Eigen::MatrixXd A = Eigen::MatrixXd::NullaryExpr(2, 2, [&]() { return stream.normal(); });
  // as a function of Sigma at fixed A, the collapsed posterior equals
  // the normalized conditional up to a Sigma-free constant
  double reference = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd g = Eigen::MatrixXd::NullaryExpr(2, 2, [&]() { return stream.normal(); });
    const Eigen::MatrixXd sigma = g * g.transpose() + 0.3 * Eigen::MatrixXd::Identity(2, 2);
    const double gap =
        var_log_marginal_a_sigma(data, A, sigma) - sigma_conditional_logpdf(data, A, sigma);
    if (trial == 0) reference = gap;
    CHECK(gap == doctest::Approx(reference).epsilon(1e-8));
  }
}

TEST_CASE("collapsed sweep keeps the covariance positive-definite") {
  const VarModelData data = synth_var(2, 1, 1, 50, default_truth(2, 1, 1), 127);
  RandomStream stream(128);
  VarState state = default_truth(2, 1, 1);
  for (int i = 0; i < 10000; ++i) {
    state = var_collapsed_step(data, state, stream);
    const Eigen::LLT<Eigen::MatrixXd> llt(state.Sigma);
    REQUIRE(llt.info() == Eigen::Success);
    REQUIRE(state.Sigma.isApprox(state.Sigma.transpose(), 1e-12));
  }
}

TEST_CASE("the sweep never reads the current B") {
  const VarModelData data = synth_var(2, 1, 1, 50, default_truth(2, 1, 1), 129);

  SUBCASE("bitwise: same stream, different initial B, identical trajectories") {
    VarState a = default_truth(2, 1, 1);
    VarState b = a;
    b.B = Eigen::MatrixXd::Constant(1, 2, 50.0);
    RandomStream sa(130), sb(130);
    for (int i = 0; i < 50; ++i) {
      a = var_collapsed_step(data, a, sa);
      b = var_collapsed_step(data, b, sb);
      CHECK((a.A - b.A).cwiseAbs().maxCoeff() == 0.0);
      CHECK((a.B - b.B).cwiseAbs().maxCoeff() == 0.0);
      CHECK((a.Sigma - b.Sigma).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  SUBCASE("statistically: different seeds and initial B, same A-marginal") {
    auto collect = [&](double b_init, std::uint64_t seed) {
      VarState state = default_truth(2, 1, 1);
      state.B = Eigen::MatrixXd::Constant(1, 2, b_init);
      RandomStream stream(seed);
      std::vector<double> draws;
      draws.reserve(10000);
      for (int i = 0; i < 10500; ++i) {
        state = var_collapsed_step(data, state, stream);
        if (i >= 500) draws.push_back(state.A(0, 0));
      }
      return draws;
    };
    const auto run_a = collect(0.0, 131);
    const auto run_b = collect(100.0, 132);
    const testsupport::KsResult ks = testsupport::ks_two_sample(run_a, run_b);
    CHECK(ks.pvalue > 0.001);
  }
}

TEST_CASE("collapsed sweep agrees with a random-walk chain on the scalar model") {
  const int r = 1, p = 1, lag = 1, K = 60;
  VarState truth;
  truth.A = Eigen::MatrixXd::Constant(1, 1, 0.4);
  truth.B = Eigen::MatrixXd::Constant(1, 1, 1.0);
  truth.Sigma = Eigen::MatrixXd::Constant(1, 1, 1.0);
  const VarModelData data = synth_var(r, p, lag, K, truth, 133);

  // collapsed run
  RandomStream gibbs_stream(134);
  VarState state = truth;
  std::vector<double> collapsed_draws;
  collapsed_draws.reserve(20000);
  for (int i = 0; i < 21000; ++i) {
    state = var_collapsed_step(data, state, gibbs_stream);
    if (i >= 1000) collapsed_draws.push_back(state.A(0, 0));
  }

  // random-walk on the packed joint posterior
  const TargetDensity target = var_joint_target(data);
  RandomStream mh_stream(135);
  const Eigen::VectorXd start = pack_var_state(data, truth);
  const AdaptationReport tuning =
      tune_scale(target, start, 3000, default_target_acceptance(target.dimension), mh_stream);
  TransitionKernel kernel = make_rw_mh_kernel(target, tuning.scale);
  const ChainOutput mh_chain = run_kernel_chain(kernel, start, 200000, mh_stream);

  Eigen::VectorXd collapsed_series =
      Eigen::Map<const Eigen::VectorXd>(collapsed_draws.data(),
                                        static_cast<Eigen::Index>(collapsed_draws.size()));
  const Eigen::VectorXd mh_series = chain_series(discard_burnin(mh_chain, 10000), 0);
  const double gap = std::abs(ergodic_mean(collapsed_series) - ergodic_mean(mh_series));
  const double combined =
      std::sqrt(std::pow(mcse(collapsed_series), 2) + std::pow(mcse(mh_series), 2));
  CHECK(gap < 3.0 * combined);
}

TEST_CASE("packing round-trips and synthetic data is deterministic") {
  const VarModelData data = synth_var(2, 1, 1, 25, default_truth(2, 1, 1), 136);
  RandomStream stream(137);
  VarState state = default_truth(2, 1, 1);
  state = var_collapsed_step(data, state, stream);
  const Eigen::VectorXd packed = pack_var_state(data, state);
  const VarState back = unpack_var_state(data, packed);
  CHECK((back.A - state.A).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.B - state.B).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.Sigma - state.Sigma).cwiseAbs().maxCoeff() == 0.0);

  const VarModelData again = synth_var(2, 1, 1, 25, default_truth(2, 1, 1), 136);
  CHECK((again.Y - data.Y).cwiseAbs().maxCoeff() == 0.0);
  CHECK((again.X - data.X).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("each conditional draw reproduces its analytic moments") {
  const VarModelData data = synth_var(2, 1, 1, 50, default_truth(2, 1, 1), 140);
  const Eigen::MatrixXd A = 0.3 * Eigen::MatrixXd::Identity(2, 2);
  const int n = 40000;

  SUBCASE("covariance draw: inverse-Wishart mean Psi / (df - r - 1)") {
    const Eigen::MatrixXd Xe = data.exog_design();
    const Eigen::MatrixXd E = data.effective_response() - data.lagged_design() * A;
    const Eigen::MatrixXd xtx = Xe.transpose() * Xe;
    const Eigen::MatrixXd psi =
        data.D + E.transpose() * E -
        (Xe.transpose() * E).transpose() * xtx.inverse() * (Xe.transpose() * E);
    const double df = data.effective() - data.p() + data.a - 2 - 1;
    const Eigen::MatrixXd expected = psi / (df - 2 - 1);

    RandomStream stream(141);
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(2, 2);
    for (int i = 0; i < n; ++i) mean += var_draw_sigma(data, A, stream);
    mean /= n;
    CHECK((mean - expected).cwiseAbs().maxCoeff() < 0.05 * expected.cwiseAbs().maxCoeff());
  }

  SUBCASE("coefficient draw: Gaussian mean from the normal equations") {
    const Eigen::MatrixXd sigma = default_truth(2, 1, 1).Sigma;
    const Eigen::MatrixXd Xe = data.exog_design();
    const Eigen::MatrixXd W = data.lagged_design();
    const Eigen::MatrixXd Ye = data.effective_response();
    const Eigen::MatrixXd xtx_inv = (Xe.transpose() * Xe).inverse();
    const Eigen::MatrixXd wtmw =
        W.transpose() * W - (Xe.transpose() * W).transpose() * xtx_inv * (Xe.transpose() * W);
    const Eigen::MatrixXd wtmy =
        W.transpose() * Ye - (Xe.transpose() * W).transpose() * xtx_inv * (Xe.transpose() * Ye);
    const Eigen::MatrixXd sigma_inv = sigma.inverse();
    // dense 4x4 normal equations assembled independently
    Eigen::MatrixXd precision(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        precision.block(2 * i, 2 * j, 2, 2) = sigma_inv(i, j) * wtmw;
    precision += data.C;
    const Eigen::MatrixXd lin = wtmy * sigma_inv;
    const Eigen::VectorXd expected =
        precision.inverse() *
        (Eigen::Map<const Eigen::VectorXd>(lin.data(), 4) + data.C * data.m);

    RandomStream stream(142);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
    for (int i = 0; i < n; ++i) {
      const Eigen::MatrixXd draw = var_draw_coefficients(data, sigma, stream);
      mean += Eigen::Map<const Eigen::VectorXd>(draw.data(), 4);
    }
    mean /= n;
    CHECK((mean - expected).cwiseAbs().maxCoeff() < 0.01);
  }

  SUBCASE("exogenous draw: matrix normal around the regression solve") {
    const Eigen::MatrixXd sigma = default_truth(2, 1, 1).Sigma;
    const Eigen::MatrixXd Xe = data.exog_design();
    const Eigen::MatrixXd E = data.effective_response() - data.lagged_design() * A;
    const Eigen::MatrixXd xtx = Xe.transpose() * Xe;
    const Eigen::MatrixXd b_hat = xtx.inverse() * Xe.transpose() * E;

    RandomStream stream(143);
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(1, 2);
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(1, 2);
    for (int i = 0; i < n; ++i) {
      const Eigen::MatrixXd draw = var_draw_exog(data, A, sigma, stream);
      mean += draw;
      second += draw.cwiseProduct(draw);
    }
    mean /= n;
    second /= n;
    const double var00 = second(0, 0) - mean(0, 0) * mean(0, 0);
    const double expected_var00 = sigma(0, 0) * xtx.inverse()(0, 0);
    CHECK((mean - b_hat).cwiseAbs().maxCoeff() < 0.01);
    CHECK(var00 == doctest::Approx(expected_var00).epsilon(0.05));
  }
}

TEST_CASE("construction rejects malformed priors") {
  Eigen::MatrixXd bad_c = Eigen::MatrixXd::Identity(4, 4);
  bad_c(0, 0) = -1.0;
  CHECK_THROWS_AS(VarModelData(Eigen::MatrixXd::Zero(10, 2), Eigen::MatrixXd::Zero(10, 1), 1,
                               Eigen::VectorXd::Zero(4), bad_c,
                               Eigen::MatrixXd::Identity(2, 2), 4.0),
                  std::domain_error);
  CHECK_THROWS_AS(VarModelData(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 1), 2,
                               Eigen::VectorXd::Zero(8), Eigen::MatrixXd::Identity(8, 8),
                               Eigen::MatrixXd::Identity(2, 2), 4.0),
                  std::domain_error);
}
