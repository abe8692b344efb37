#include "linchpin/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace linchpin {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  auto end = s.find_last_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  return s.substr(begin, end - begin + 1);
}

struct RawEntry {
  std::string value;
  int line = 0;
};

long parse_long(const std::string& key, const RawEntry& entry) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(entry.value, &pos);
    if (pos != entry.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' (line " + std::to_string(entry.line) +
                      "): expected an integer, got '" + entry.value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const RawEntry& entry) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(entry.value, &pos);
    if (pos != entry.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' (line " + std::to_string(entry.line) +
                      "): expected an unsigned integer, got '" + entry.value + "'");
  }
}

const std::set<std::string> kModels = {"rosenbrock", "gaussian", "linmod", "spikeslab", "var"};
const std::set<std::string> kSamplers = {"gibbs", "linchpin", "joint-mh", "collapsed-gibbs"};

// model -> samplers with a registered construction
bool supported(const std::string& model, const std::string& sampler) {
  if (model == "rosenbrock") return sampler == "linchpin" || sampler == "joint-mh";
  if (model == "gaussian")
    return sampler == "gibbs" || sampler == "linchpin" || sampler == "joint-mh";
  if (model == "linmod") return sampler == "linchpin";
  if (model == "spikeslab") return sampler == "linchpin";
  if (model == "var") return sampler == "collapsed-gibbs" || sampler == "joint-mh";
  return false;
}

}  // namespace

bool combination_supported(const std::string& model, const std::string& sampler) {
  return supported(model, sampler);
}

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, RawEntry> raw;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config: line " + std::to_string(line_no) + ": empty key or value");
    if (raw.count(key))
      throw ConfigError("config: key '" + key + "' (line " + std::to_string(line_no) +
                        "): duplicate assignment");
    raw[key] = RawEntry{value, line_no};
  }

  ExperimentConfig config;
  auto take = [&raw](const std::string& key) -> const RawEntry* {
    const auto it = raw.find(key);
    return it == raw.end() ? nullptr : &it->second;
  };
  auto consume = [&raw](const std::string& key) { raw.erase(key); };

  if (const RawEntry* e = take("model")) {
    if (!kModels.count(e->value))
      throw ConfigError("config: key 'model' (line " + std::to_string(e->line) +
                        "): unknown model '" + e->value + "'");
    config.model = e->value;
    consume("model");
  } else {
    throw ConfigError("config: key 'model': required but missing");
  }

  for (const char* key : {"sampler", "sampler2"}) {
    if (const RawEntry* e = take(key)) {
      if (!kSamplers.count(e->value))
        throw ConfigError("config: key '" + std::string(key) + "' (line " +
                          std::to_string(e->line) + "): unknown sampler '" + e->value + "'");
      (std::string(key) == "sampler" ? config.sampler : config.sampler2) = e->value;
      consume(key);
    }
  }
  if (config.sampler.empty())
    throw ConfigError("config: key 'sampler': required but missing");

  if (const RawEntry* e = take("n")) {
    config.n = parse_long("n", *e);
    consume("n");
  } else {
    throw ConfigError("config: key 'n': required but missing");
  }
  if (const RawEntry* e = take("burnin")) { config.burnin = parse_long("burnin", *e); consume("burnin"); }
  if (const RawEntry* e = take("thin")) { config.thin = parse_long("thin", *e); consume("thin"); }
  if (const RawEntry* e = take("pilot")) { config.pilot = parse_long("pilot", *e); consume("pilot"); }
  if (const RawEntry* e = take("replicates")) {
    config.replicates = parse_long("replicates", *e);
    consume("replicates");
  }
  if (const RawEntry* e = take("seed")) { config.seed = parse_u64("seed", *e); consume("seed"); }
  if (const RawEntry* e = take("out")) { config.out = e->value; consume("out"); }
  if (const RawEntry* e = take("name")) { config.name = e->value; consume("name"); }
  if (const RawEntry* e = take("marginal")) {
    if (e->value != "mh" && e->value != "exact")
      throw ConfigError("config: key 'marginal' (line " + std::to_string(e->line) +
                        "): expected mh or exact");
    config.marginal = e->value;
    consume("marginal");
  }
  if (const RawEntry* e = take("proposal")) {
    if (e->value != "uniform" && e->value != "gaussian")
      throw ConfigError("config: key 'proposal' (line " + std::to_string(e->line) +
                        "): expected uniform or gaussian");
    config.proposal = e->value;
    consume("proposal");
  }

  // Remaining dotted model.* keys belong to the model; anything else is unknown.
  std::vector<std::string> consumed;
  for (const auto& [key, entry] : raw) {
    if (key.rfind("model.", 0) == 0) {
      config.model_params[key.substr(6)] = entry.value;
      consumed.push_back(key);
    }
  }
  for (const auto& key : consumed) consume(key);
  if (!raw.empty()) {
    const auto& [key, entry] = *raw.begin();
    throw ConfigError("config: key '" + key + "' (line " + std::to_string(entry.line) +
                      "): unknown key");
  }

  // Invariants.
  if (config.n < 1) throw ConfigError("config: key 'n': chain length must be >= 1");
  if (config.burnin < 0 || config.burnin >= config.n)
    throw ConfigError("config: key 'burnin': must satisfy 0 <= burnin < n");
  if (config.thin < 1) throw ConfigError("config: key 'thin': must be >= 1");
  if (config.pilot < 100) throw ConfigError("config: key 'pilot': must be >= 100");
  if (config.replicates < 1) throw ConfigError("config: key 'replicates': must be >= 1");
  if (!supported(config.model, config.sampler))
    throw ConfigError("config: key 'sampler': combination '" + config.model + "' + '" +
                      config.sampler + "' is not supported");
  if (!config.sampler2.empty() && !supported(config.model, config.sampler2))
    throw ConfigError("config: key 'sampler2': combination '" + config.model + "' + '" +
                      config.sampler2 + "' is not supported");
  if (config.name.empty()) config.name = config.model + "-" + config.sampler;
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::map<std::string, std::string> ExperimentConfig::echo() const {
  std::map<std::string, std::string> map;
  map["model"] = model;
  map["sampler"] = sampler;
  if (!sampler2.empty()) map["sampler2"] = sampler2;
  map["n"] = std::to_string(n);
  map["burnin"] = std::to_string(burnin);
  map["thin"] = std::to_string(thin);
  map["pilot"] = std::to_string(pilot);
  map["replicates"] = std::to_string(replicates);
  map["seed"] = std::to_string(seed);
  map["out"] = out;
  map["name"] = name;
  map["marginal"] = marginal;
  map["proposal"] = proposal;
  for (const auto& [key, value] : model_params) map["model." + key] = value;
  return map;
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream out_text;
  for (const auto& [key, value] : echo()) out_text << key << " = " << value << "\n";
  return out_text.str();
}

}  // namespace linchpin
