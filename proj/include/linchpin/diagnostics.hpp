#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "linchpin/chain.hpp"

namespace linchpin {

using StateFunction = std::function<double(const Eigen::VectorXd&)>;

/// Extract the scalar series h(Z_1), ..., h(Z_n) from a chain.
Eigen::VectorXd chain_series(const ChainOutput& chain, int component);
Eigen::VectorXd chain_series(const ChainOutput& chain, const StateFunction& h);

// Core estimators on a scalar series. All are pure.
double ergodic_mean(const Eigen::VectorXd& series);

/// Sample variance (denominator n), the marginal-variance estimate.
double marginal_variance(const Eigen::VectorXd& series);

/// Batch-means estimate of the asymptotic variance in the chain CLT for
/// the mean of `series`. With a batches of length b, the estimator is
/// b/(a-1) * sum_k (batch_mean_k - grand_mean)^2, the grand mean taken
/// over the a*b retained points (the tail remainder is dropped).
double batch_means_var(const Eigen::VectorXd& series, Eigen::Index batch_size);

/// Default batch size floor(sqrt(n)); requires n >= 100.
double batch_means_var(const Eigen::VectorXd& series);

/// Effective sample size n * marginal_variance / batch_means_var, clipped
/// to (0, n]. A flat series, or an exceptional zero asymptotic-variance
/// estimate, reports the full n.
double effective_sample_size(const Eigen::VectorXd& series);

double mcse(const Eigen::VectorXd& series);

/// Central interval mean +- z_{(1+level)/2} * mcse for level in (0,1).
std::pair<double, double> confidence_interval(const Eigen::VectorXd& series, double level);

/// Sample autocorrelations r_0..r_max_lag normalized by the lag-0
/// autocovariance; requires max_lag < n/2 and a non-degenerate series.
std::vector<double> acf(const Eigen::VectorXd& series, int max_lag);

// ChainOutput conveniences.
double ergodic_mean(const ChainOutput& chain, int component);
double ergodic_mean(const ChainOutput& chain, const StateFunction& h);
double batch_means_var(const ChainOutput& chain, int component);
double effective_sample_size(const ChainOutput& chain, int component);
std::pair<double, double> confidence_interval(const ChainOutput& chain, int component,
                                              double level);
std::vector<double> acf(const ChainOutput& chain, int component, int max_lag);

struct ComponentSummary {
  std::string name;
  double mean = 0.0;
  double marginal_variance = 0.0;  // lambda^2 estimate
  double asymptotic_variance = 0.0;
  double ess = 0.0;
  double mcse = 0.0;
  std::vector<double> acf;  // lags 0..acf_lags
};

struct ChainSummary {
  std::vector<ComponentSummary> components;
  double acceptance_rate = 1.0;
  Eigen::Index n = 0;
  std::uint64_t seed = 0;
  std::string kernel;
  double wall_seconds = 0.0;
};

/// Per-component summary; pure in the chain contents.
ChainSummary summarize(const ChainOutput& chain, int acf_lags = 10);

}  // namespace linchpin
