#include "doctest.h"

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "linchpin/distributions.hpp"
#include "support/stats.hpp"

using namespace linchpin;
using testsupport::trapezoid;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  double se_mean = 0.0;
  double se_var = 0.0;
};

template <typename Draw>
Moments sample_moments(Draw&& draw, int n) {
  double sum = 0.0, sum_sq = 0.0, sum_4 = 0.0;
  std::vector<double> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    values[static_cast<std::size_t>(i)] = draw();
    sum += values[static_cast<std::size_t>(i)];
  }
  const double mean = sum / n;
  for (int i = 0; i < n; ++i) {
    const double d = values[static_cast<std::size_t>(i)] - mean;
    sum_sq += d * d;
    sum_4 += d * d * d * d;
  }
  Moments m;
  m.mean = mean;
  m.var = sum_sq / n;
  m.se_mean = std::sqrt(m.var / n);
  m.se_var = std::sqrt(std::max(sum_4 / n - m.var * m.var, 0.0) / n);
  return m;
}
}  // namespace

TEST_CASE("normal draws match N(1,10) moments") {
  RandomStream stream(11);
  const int n = 1000000;
  const Moments m = sample_moments([&] { return draw_normal(stream, 1.0, 10.0); }, n);
  CHECK(std::abs(m.mean - 1.0) < 3.0 * std::sqrt(10.0 / n));
  RandomStream stream2(12);
  const Moments m2 = sample_moments([&] { return draw_normal(stream2, 0.0, 4.0); }, n);
  CHECK(std::abs(m2.var - 4.0) < 0.05 * 4.0);
  CHECK_THROWS_AS(draw_normal(stream, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(draw_normal(stream, 0.0, -1.0), std::domain_error);
}

TEST_CASE("gamma draws match the shape-rate parameterization") {
  RandomStream stream(13);
  const int n = 1000000;
  const Moments m = sample_moments([&] { return draw_gamma(stream, 2.0, 3.0); }, n);
  CHECK(std::abs(m.mean - 2.0 / 3.0) < 0.01 * (2.0 / 3.0));

  // shape 1, rate 1 is the unit exponential
  RandomStream stream2(14);
  int exceed = 0;
  for (int i = 0; i < n; ++i) exceed += draw_gamma(stream2, 1.0, 1.0) > 1.0 ? 1 : 0;
  CHECK(std::abs(static_cast<double>(exceed) / n - std::exp(-1.0)) < 0.005);

  CHECK_THROWS_AS(draw_gamma(stream, -1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(draw_gamma(stream, 1.0, 0.0), std::domain_error);

  // shape below one exercises the boost path
  RandomStream stream3(15);
  const Moments m3 = sample_moments([&] { return draw_gamma(stream3, 0.5, 2.0); }, n);
  CHECK(std::abs(m3.mean - 0.25) < 5.0 * m3.se_mean);
}

TEST_CASE("log densities are exact, with support handling") {
  CHECK(normal_logpdf(0.0, 0.0, 1.0) == doctest::Approx(-0.9189385332046727).epsilon(1e-12));
  CHECK(inverse_gamma_logpdf(-0.5, 2.0, 3.0) == -kInf);
  CHECK(inverse_gamma_logpdf(0.0, 2.0, 3.0) == -kInf);
  // Gamma(2,3) at 1: log(rate^shape / Gamma(shape)) + (shape-1) log x - rate x
  CHECK(gamma_logpdf(1.0, 2.0, 3.0) ==
        doctest::Approx(std::log(9.0) - 3.0).epsilon(1e-12));
  CHECK(gamma_logpdf(-1.0, 2.0, 3.0) == -kInf);
  CHECK(uniform_logpdf(0.5, 0.0, 2.0) == doctest::Approx(std::log(0.5)));
  CHECK(uniform_logpdf(2.5, 0.0, 2.0) == -kInf);
  CHECK(bernoulli_logpmf(1, 0.25) == doctest::Approx(std::log(0.25)));
  CHECK(bernoulli_logpmf(0, 0.25) == doctest::Approx(std::log(0.75)));
}

TEST_CASE("every univariate density integrates to one") {
  // truncation windows chosen so the missing tail mass is far below 1e-4
  const double normal_mass = trapezoid(
      [](double x) { return std::exp(normal_logpdf(x, 1.0, 10.0)); }, -40.0, 42.0, 40000);
  CHECK(normal_mass == doctest::Approx(1.0).epsilon(1e-4));

  const double gamma_mass = trapezoid(
      [](double x) { return x <= 0.0 ? 0.0 : std::exp(gamma_logpdf(x, 2.0, 3.0)); }, 0.0,
      30.0, 40000);
  CHECK(gamma_mass == doctest::Approx(1.0).epsilon(1e-4));

  const double inv_gamma_mass = trapezoid(
      [](double x) { return x <= 0.0 ? 0.0 : std::exp(inverse_gamma_logpdf(x, 2.0, 3.0)); },
      0.0, 600.0, 400000);
  CHECK(inv_gamma_mass == doctest::Approx(1.0).epsilon(1e-4));

  const double uniform_mass = trapezoid(
      [](double x) { return std::exp(uniform_logpdf(x, -1.0, 3.0)); }, -1.0, 3.0, 4000);
  CHECK(uniform_mass == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("sampler moments match analytic values within five standard errors") {
  const int n = 1000000;
  struct Family {
    const char* name;
    double mean;
    double var;
    std::function<double(RandomStream&)> draw;
  };
  const std::vector<Family> families = {
      {"normal(2,5)", 2.0, 5.0, [](RandomStream& s) { return draw_normal(s, 2.0, 5.0); }},
      {"gamma(3,2)", 1.5, 0.75, [](RandomStream& s) { return draw_gamma(s, 3.0, 2.0); }},
      {"inv-gamma(5,4)", 1.0, 1.0 / 3.0,
       [](RandomStream& s) { return draw_inverse_gamma(s, 5.0, 4.0); }},
      {"uniform(-1,3)", 1.0, 4.0 / 3.0,
       [](RandomStream& s) { return draw_uniform(s, -1.0, 3.0); }},
      {"bernoulli(0.3)", 0.3, 0.21,
       [](RandomStream& s) { return draw_bernoulli(s, 0.3) ? 1.0 : 0.0; }},
  };
  std::uint64_t seed = 100;
  for (const auto& family : families) {
    CAPTURE(family.name);
    RandomStream stream(seed++);
    const Moments m = sample_moments([&] { return family.draw(stream); }, n);
    CHECK(std::abs(m.mean - family.mean) < 5.0 * m.se_mean);
    CHECK(std::abs(m.var - family.var) < 5.0 * m.se_var);
  }
}

TEST_CASE("multivariate normal sampling and density") {
  SUBCASE("identity covariance, zero mean") {
    const int d = 3, n = 100000;
    MvnParams params(Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Identity(d, d));
    RandomStream stream(21);
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < n; ++i) sums += draw_mvn(stream, params);
    for (int c = 0; c < d; ++c)
      CHECK(std::abs(sums[c] / n) < 3.0 / std::sqrt(static_cast<double>(n)));
  }

  SUBCASE("correlation 0.5 reproduced in samples") {
    Eigen::MatrixXd sigma(2, 2);
    sigma << 1.0, 0.5, 0.5, 1.0;
    MvnParams params(Eigen::VectorXd::Zero(2), sigma);
    RandomStream stream(22);
    const int n = 1000000;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd v = draw_mvn(stream, params);
      sx += v[0]; sy += v[1];
      sxx += v[0] * v[0]; syy += v[1] * v[1]; sxy += v[0] * v[1];
    }
    const double mx = sx / n, my = sy / n;
    const double corr = (sxy / n - mx * my) /
                        std::sqrt((sxx / n - mx * mx) * (syy / n - my * my));
    CHECK(std::abs(corr - 0.5) < 0.01);
  }

  SUBCASE("lag-four correlation under the rho^|i-j| structure") {
    // oracle: the covariance entry itself
    const double rho = 0.99;
    Eigen::MatrixXd sigma(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) sigma(i, j) = std::pow(rho, std::abs(i - j));
    CHECK(sigma(0, 4) == doctest::Approx(0.96059601).epsilon(1e-12));

    MvnParams params(Eigen::VectorXd::Zero(5), sigma);
    RandomStream stream(23);
    const int n = 1000000;
    double s1 = 0, s5 = 0, s11 = 0, s55 = 0, s15 = 0;
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd v = draw_mvn(stream, params);
      s1 += v[0]; s5 += v[4];
      s11 += v[0] * v[0]; s55 += v[4] * v[4]; s15 += v[0] * v[4];
    }
    const double m1 = s1 / n, m5 = s5 / n;
    const double corr = (s15 / n - m1 * m5) /
                        std::sqrt((s11 / n - m1 * m1) * (s55 / n - m5 * m5));
    CHECK(std::abs(corr - sigma(0, 4)) < 0.01);
  }

  SUBCASE("construction rejects non-positive-definite covariance") {
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
    CHECK_THROWS_AS(MvnParams(Eigen::VectorXd::Zero(2), bad), std::domain_error);
    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.3, 0.2, 1.0;
    CHECK_THROWS_AS(MvnParams(Eigen::VectorXd::Zero(2), asym), std::domain_error);
  }

  SUBCASE("factor reconstructs the covariance") {
    Eigen::MatrixXd sigma(3, 3);
    sigma << 2.0, 0.6, 0.2, 0.6, 1.5, 0.4, 0.2, 0.4, 1.2;
    MvnParams params(Eigen::VectorXd::Zero(3), sigma);
    CHECK((params.factor * params.factor.transpose() - sigma).cwiseAbs().maxCoeff() <=
          1e-10);
    CHECK((params.factor.diagonal().array() > 0.0).all());
  }

  SUBCASE("density agrees with the univariate form in one dimension") {
    MvnParams params(Eigen::VectorXd::Constant(1, 0.7),
                     Eigen::MatrixXd::Constant(1, 1, 2.5));
    Eigen::VectorXd x = Eigen::VectorXd::Constant(1, -0.3);
    CHECK(mvn_logpdf(x, params) == doctest::Approx(normal_logpdf(-0.3, 0.7, 2.5)).epsilon(1e-12));
  }
}

TEST_CASE("normal quantile inverts the normal CDF") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-8));
  CHECK(normal_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-8));
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(1.5), std::domain_error);
}

TEST_CASE("draw sequences are deterministic in the seed") {
  RandomStream a(5), b(5);
  for (int i = 0; i < 200; ++i) {
    CHECK(draw_gamma(a, 2.5, 1.5) == draw_gamma(b, 2.5, 1.5));
    CHECK(draw_normal(a, 0.0, 1.0) == draw_normal(b, 0.0, 1.0));
  }
}
