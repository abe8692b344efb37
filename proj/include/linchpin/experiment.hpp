#pragma once

#include <string>
#include <vector>

#include "linchpin/config.hpp"

namespace linchpin {

struct ExperimentResult {
  std::vector<std::string> outputs;  // files written
  bool passed = true;                // validator tolerances met (validate only)
};

/// Run the configured chain(s), writing a full-precision trace CSV per
/// replicate and one JSON summary. Replicates run in parallel on derived
/// substreams; reruns with an identical config are byte-identical.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Paired run of config.sampler and config.sampler2 on the same target
/// (shared model instance, independent streams); emits both traces and a
/// joint summary with per-component ESS ratios.
ExperimentResult run_compare(const ExperimentConfig& config);

/// Exact finite-instance checks: invariance of the composed kernel,
/// detailed-balance equivalence, matched total-variation curves, and
/// start-coordinate independence, reported as JSON. `passed` is false
/// when any violation exceeds its tolerance.
ExperimentResult run_validators(const ExperimentConfig& config);

/// Exhaustive posterior dump for the binary-inclusion model (<= 12
/// coordinates): per-model probabilities CSV plus inclusion JSON.
ExperimentResult run_enumerate(const ExperimentConfig& config);

}  // namespace linchpin
