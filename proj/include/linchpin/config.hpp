#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace linchpin {

/// Error in a config document; message names the offending key and line.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat typed key-value experiment description. The text format is one
/// `key = value` assignment per line, `#` comments, blank lines ignored;
/// model parameters use dotted keys (model.rho = 0.99). Parsing fills
/// documented defaults and rejects unknown keys, duplicate keys, type
/// errors, and invariant violations, naming the key and line.
struct ExperimentConfig {
  std::string model;       // rosenbrock | gaussian | linmod | spikeslab | var
  std::string sampler;     // gibbs | linchpin | joint-mh | collapsed-gibbs
  std::string sampler2;    // second sampler for `compare`, optional otherwise
  long n = 0;              // chain length
  long burnin = 0;         // discarded prefix, < n
  long thin = 1;
  long pilot = 1000;       // tuning pilot length for MH kernels
  long replicates = 1;
  std::uint64_t seed = 20240801;
  std::string out = ".";
  std::string name;                 // output prefix; defaults to model-sampler
  std::string marginal = "mh";      // mh | exact: linchpin marginal kernel flavor
  std::string proposal = "uniform"; // uniform | gaussian MH proposal

  std::map<std::string, std::string> model_params;  // dotted model.* keys, prefix stripped

  /// Resolved key -> value map; re-parsing its serialization reproduces
  /// the run exactly.
  std::map<std::string, std::string> echo() const;
  std::string serialize() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// True when the model/sampler pair has a registered construction.
bool combination_supported(const std::string& model, const std::string& sampler);

}  // namespace linchpin
