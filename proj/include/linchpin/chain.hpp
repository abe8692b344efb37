#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace linchpin {

/// Recorded output of a chain run: one row per retained step, column per
/// state component, plus the bookkeeping needed to reproduce the run.
struct ChainOutput {
  Eigen::MatrixXd draws;  // n x d, row-major in time
  long accepted = 0;      // accepted MH proposals
  long attempted = 0;     // attempted MH proposals; 0 for pure Gibbs scans
  std::vector<char> accept_flags;  // per retained row; empty when attempted == 0
  std::uint64_t seed = 0;
  std::string kernel;
  std::vector<std::string> component_names;
  double wall_seconds = 0.0;

  Eigen::Index n() const { return draws.rows(); }
  Eigen::Index dim() const { return draws.cols(); }

  // Kernels without an accept/reject step count every move as accepted.
  double acceptance_rate() const {
    return attempted == 0 ? 1.0 : static_cast<double>(accepted) / attempted;
  }
};

/// Keep rows 0, every, 2*every, ...: ceil(n / every) rows survive.
inline ChainOutput thin_chain(const ChainOutput& chain, int every) {
  if (every < 1) throw std::domain_error("thin_chain: thin must be >= 1");
  const Eigen::Index kept = (chain.n() + every - 1) / every;
  ChainOutput out = chain;
  out.draws.resize(kept, chain.dim());
  out.accept_flags.clear();
  for (Eigen::Index i = 0; i < kept; ++i) {
    out.draws.row(i) = chain.draws.row(i * every);
    if (!chain.accept_flags.empty())
      out.accept_flags.push_back(chain.accept_flags[static_cast<std::size_t>(i * every)]);
  }
  return out;
}

/// Drop the first `count` rows (explicit burn-in discard).
inline ChainOutput discard_burnin(const ChainOutput& chain, int count) {
  if (count < 0 || count >= chain.n())
    throw std::domain_error("discard_burnin: count must lie in [0, n)");
  ChainOutput out = chain;
  out.draws = chain.draws.bottomRows(chain.n() - count).eval();
  if (!chain.accept_flags.empty())
    out.accept_flags.assign(chain.accept_flags.begin() + count, chain.accept_flags.end());
  return out;
}

}  // namespace linchpin
