#include "linchpin/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "linchpin/distributions.hpp"

namespace linchpin {

Eigen::VectorXd chain_series(const ChainOutput& chain, int component) {
  if (component < 0 || component >= chain.dim())
    throw std::domain_error("chain_series: component out of range");
  return chain.draws.col(component);
}

Eigen::VectorXd chain_series(const ChainOutput& chain, const StateFunction& h) {
  Eigen::VectorXd series(chain.n());
  for (Eigen::Index i = 0; i < chain.n(); ++i) series[i] = h(chain.draws.row(i));
  return series;
}

double ergodic_mean(const Eigen::VectorXd& series) {
  if (series.size() < 1) throw std::domain_error("ergodic_mean: empty series");
  return series.mean();
}

double marginal_variance(const Eigen::VectorXd& series) {
  const double mean = ergodic_mean(series);
  return (series.array() - mean).square().sum() / static_cast<double>(series.size());
}

double batch_means_var(const Eigen::VectorXd& series, Eigen::Index batch_size) {
  const Eigen::Index n = series.size();
  if (batch_size < 1) throw std::domain_error("batch_means_var: batch size must be >= 1");
  const Eigen::Index batches = n / batch_size;
  if (batches < 2) throw std::domain_error("batch_means_var: need at least two batches");

  const Eigen::Index used = batches * batch_size;
  Eigen::VectorXd batch_means(batches);
  for (Eigen::Index k = 0; k < batches; ++k)
    batch_means[k] = series.segment(k * batch_size, batch_size).mean();
  const double grand_mean = series.head(used).mean();
  const double ss = (batch_means.array() - grand_mean).square().sum();
  return static_cast<double>(batch_size) * ss / static_cast<double>(batches - 1);
}

double batch_means_var(const Eigen::VectorXd& series) {
  if (series.size() < 100)
    throw std::domain_error("batch_means_var: need at least 100 points");
  const auto batch_size =
      static_cast<Eigen::Index>(std::floor(std::sqrt(static_cast<double>(series.size()))));
  return batch_means_var(series, batch_size);
}

double effective_sample_size(const Eigen::VectorXd& series) {
  const auto n = static_cast<double>(series.size());
  const double lambda_sq = marginal_variance(series);
  if (lambda_sq == 0.0) return n;  // flat series: every point carries the value
  const double sigma_sq = batch_means_var(series);
  if (sigma_sq == 0.0) return n;
  return std::min(n, std::max(n * lambda_sq / sigma_sq,
                              std::numeric_limits<double>::min()));
}

double mcse(const Eigen::VectorXd& series) {
  return std::sqrt(batch_means_var(series) / static_cast<double>(series.size()));
}

std::pair<double, double> confidence_interval(const Eigen::VectorXd& series, double level) {
  if (!(level > 0.0 && level < 1.0))
    throw std::domain_error("confidence_interval: level must lie in (0,1)");
  const double center = ergodic_mean(series);
  const double half_width = normal_quantile(0.5 * (1.0 + level)) * mcse(series);
  return {center - half_width, center + half_width};
}

std::vector<double> acf(const Eigen::VectorXd& series, int max_lag) {
  const Eigen::Index n = series.size();
  if (max_lag < 0 || 2 * static_cast<Eigen::Index>(max_lag) >= n)
    throw std::domain_error("acf: max lag must satisfy 0 <= lag < n/2");
  const double mean = series.mean();
  const Eigen::VectorXd centered = series.array() - mean;
  const double c0 = centered.squaredNorm() / static_cast<double>(n);
  if (c0 == 0.0) throw std::domain_error("acf: series has zero variance");

  std::vector<double> result(static_cast<std::size_t>(max_lag) + 1);
  result[0] = 1.0;
  for (int lag = 1; lag <= max_lag; ++lag) {
    const double ck = centered.head(n - lag).dot(centered.tail(n - lag)) /
                      static_cast<double>(n);
    result[static_cast<std::size_t>(lag)] = ck / c0;
  }
  return result;
}

double ergodic_mean(const ChainOutput& chain, int component) {
  return ergodic_mean(chain_series(chain, component));
}
double ergodic_mean(const ChainOutput& chain, const StateFunction& h) {
  return ergodic_mean(chain_series(chain, h));
}
double batch_means_var(const ChainOutput& chain, int component) {
  return batch_means_var(chain_series(chain, component));
}
double effective_sample_size(const ChainOutput& chain, int component) {
  return effective_sample_size(chain_series(chain, component));
}
std::pair<double, double> confidence_interval(const ChainOutput& chain, int component,
                                              double level) {
  return confidence_interval(chain_series(chain, component), level);
}
std::vector<double> acf(const ChainOutput& chain, int component, int max_lag) {
  return acf(chain_series(chain, component), max_lag);
}

ChainSummary summarize(const ChainOutput& chain, int acf_lags) {
  ChainSummary summary;
  summary.acceptance_rate = chain.acceptance_rate();
  summary.n = chain.n();
  summary.seed = chain.seed;
  summary.kernel = chain.kernel;
  summary.wall_seconds = chain.wall_seconds;
  summary.components.reserve(static_cast<std::size_t>(chain.dim()));
  for (int c = 0; c < chain.dim(); ++c) {
    const Eigen::VectorXd series = chain_series(chain, c);
    ComponentSummary cs;
    cs.name = c < static_cast<int>(chain.component_names.size())
                  ? chain.component_names[static_cast<std::size_t>(c)]
                  : "c" + std::to_string(c);
    cs.mean = ergodic_mean(series);
    cs.marginal_variance = marginal_variance(series);
    if (chain.n() >= 100) {
      cs.asymptotic_variance = batch_means_var(series);
      cs.ess = effective_sample_size(series);
      cs.mcse = mcse(series);
    } else {
      // too short for batch means; the CLT quantities are unavailable
      cs.asymptotic_variance = std::numeric_limits<double>::quiet_NaN();
      cs.ess = std::numeric_limits<double>::quiet_NaN();
      cs.mcse = std::numeric_limits<double>::quiet_NaN();
    }
    const int lags = std::min<int>(acf_lags, static_cast<int>(chain.n() / 2) - 1);
    if (lags >= 1 && cs.marginal_variance > 0.0) cs.acf = acf(series, lags);
    summary.components.push_back(std::move(cs));
  }
  return summary;
}

}  // namespace linchpin
