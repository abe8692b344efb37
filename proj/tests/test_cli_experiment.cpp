#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "linchpin/config.hpp"
#include "linchpin/rng.hpp"
#include "linchpin/experiment.hpp"

using namespace linchpin;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int data_rows(const std::string& csv_text) {
  int rows = -1;  // skip the header
  std::istringstream in(csv_text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  return rows;
}

std::string temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("linchpin_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("run writes a trace with exactly n data rows and a summary") {
  const std::string dir = temp_dir("rows");
  ExperimentConfig config = parse_config(
      "model = rosenbrock\nsampler = linchpin\nmarginal = exact\nn = 10\nseed = 5\n");
  config.out = dir;
  const ExperimentResult result = run_experiment(config);
  REQUIRE(result.outputs.size() == 2);
  const std::string csv = slurp(result.outputs[0]);
  CHECK(data_rows(csv) == 10);
  CHECK(csv.rfind("iter,x,y,accepted\n", 0) == 0);

  const auto summary = nlohmann::json::parse(slurp(result.outputs[1]));
  CHECK(summary["replicates"].size() == 1);
  CHECK(summary["config"]["seed"] == "5");
  CHECK(summary["replicates"][0]["components"].size() == 2);
}

TEST_CASE("identical config and seed give byte-identical traces") {
  ExperimentConfig config = parse_config(
      "model = gaussian\nsampler = linchpin\nn = 500\npilot = 200\nseed = 42\n"
      "model.rho = 0.9\n");
  config.out = temp_dir("det_a");
  const ExperimentResult first = run_experiment(config);
  config.out = temp_dir("det_b");
  const ExperimentResult second = run_experiment(config);
  CHECK(slurp(first.outputs[0]) == slurp(second.outputs[0]));
}

TEST_CASE("the config echo reproduces the run exactly") {
  ExperimentConfig config = parse_config(
      "model = rosenbrock\nsampler = joint-mh\nn = 300\npilot = 150\nseed = 17\n");
  config.out = temp_dir("echo_a");
  const ExperimentResult first = run_experiment(config);

  ExperimentConfig from_echo = parse_config(config.serialize());
  from_echo.out = temp_dir("echo_b");
  const ExperimentResult second = run_experiment(from_echo);
  CHECK(slurp(first.outputs[0]) == slurp(second.outputs[0]));
}

TEST_CASE("replicates run on substreams with suffixed outputs") {
  ExperimentConfig config = parse_config(
      "model = rosenbrock\nsampler = linchpin\nmarginal = exact\nn = 200\nseed = 8\n"
      "replicates = 3\n");
  config.out = temp_dir("reps");
  const ExperimentResult result = run_experiment(config);
  REQUIRE(result.outputs.size() == 4);  // three traces + summary
  CHECK(result.outputs[0].find("_rep0_") != std::string::npos);
  CHECK(result.outputs[2].find("_rep2_") != std::string::npos);
  // distinct substreams produce distinct traces
  CHECK(slurp(result.outputs[0]) != slurp(result.outputs[1]));
}

TEST_CASE("burn-in and thinning shape the retained trace") {
  ExperimentConfig config = parse_config(
      "model = rosenbrock\nsampler = linchpin\nmarginal = exact\nn = 100\nburnin = 20\n"
      "thin = 4\nseed = 3\n");
  config.out = temp_dir("thin");
  const ExperimentResult result = run_experiment(config);
  CHECK(data_rows(slurp(result.outputs[0])) == 20);  // ceil(80 / 4)
}

TEST_CASE("compare pairs two samplers on one target") {
  ExperimentConfig config = parse_config(
      "model = gaussian\nsampler = linchpin\nsampler2 = gibbs\nn = 2000\npilot = 300\n"
      "seed = 21\nmodel.rho = 0.5\n");
  config.out = temp_dir("compare");
  const ExperimentResult result = run_compare(config);
  REQUIRE(result.outputs.size() == 3);
  const auto summary = nlohmann::json::parse(slurp(result.outputs[2]));
  CHECK(summary["a"]["sampler"] == "linchpin");
  CHECK(summary["b"]["sampler"] == "gibbs");
  CHECK(summary["ess_ratio_a_over_b"].contains("x5"));
  CHECK(summary["a"].contains("tuning"));

  ExperimentConfig missing = parse_config("model = gaussian\nsampler = gibbs\nn = 100\n");
  missing.out = temp_dir("compare_missing");
  CHECK_THROWS_AS(run_compare(missing), ConfigError);
}

TEST_CASE("validators pass on the banana grid and the binary chain") {
  ExperimentConfig grid = parse_config("model = rosenbrock\nsampler = linchpin\nn = 1\n");
  grid.out = temp_dir("validate_grid");
  const ExperimentResult grid_result = run_validators(grid);
  CHECK(grid_result.passed);
  const auto grid_json = nlohmann::json::parse(slurp(grid_result.outputs[0]));
  CHECK(grid_json["invariance_violation"].get<double>() <= 1e-12);
  CHECK(grid_json["detailed_balance_violation"].get<double>() <= 1e-12);
  CHECK(grid_json["same_rate_discrepancy"].get<double>() <= 1e-12);
  CHECK(grid_json["x_dependence_violation"].get<double>() <= 1e-12);
  CHECK(grid_json["tv_curve"].size() == 25);

  ExperimentConfig zchain = parse_config(
      "model = spikeslab\nsampler = linchpin\nn = 1\nmodel.p = 6\nmodel.n = 25\n");
  zchain.out = temp_dir("validate_z");
  const ExperimentResult z_result = run_validators(zchain);
  CHECK(z_result.passed);
  const auto z_json = nlohmann::json::parse(slurp(z_result.outputs[0]));
  CHECK(z_json["tv_monotone"] == true);

  ExperimentConfig oversize = parse_config(
      "model = rosenbrock\nsampler = linchpin\nn = 1\nmodel.grid_nx = 100\n"
      "model.grid_ny = 100\n");
  oversize.out = temp_dir("validate_oversize");
  CHECK_THROWS_AS(run_validators(oversize), ConfigError);
}

TEST_CASE("enumerate dumps the exact posterior table") {
  ExperimentConfig config = parse_config(
      "model = spikeslab\nsampler = linchpin\nn = 1\nmodel.p = 3\nmodel.n = 20\n");
  config.out = temp_dir("enumerate");
  const ExperimentResult result = run_enumerate(config);
  REQUIRE(result.outputs.size() == 2);
  CHECK(data_rows(slurp(result.outputs[0])) == 8);
  const auto summary = nlohmann::json::parse(slurp(result.outputs[1]));
  CHECK(summary["inclusion_probabilities"].size() == 3);
  double total = 0.0;
  std::istringstream in(slurp(result.outputs[0]));
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    const auto first = line.find_last_of(',');
    const auto prob_start = line.find_last_of(',', first - 1);
    total += std::stod(line.substr(prob_start + 1, first - prob_start - 1));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("unknown model parameters are rejected with their key") {
  ExperimentConfig config = parse_config(
      "model = rosenbrock\nsampler = linchpin\nn = 10\nmodel.rho = 0.5\n");
  config.out = temp_dir("unknown_param");
  CHECK_THROWS_WITH_AS(run_experiment(config), doctest::Contains("model.rho"), ConfigError);
}

TEST_CASE("datasets can be supplied as CSV files") {
  const std::string dir = temp_dir("csv_data");
  const std::string data_path = dir + "/linmod.csv";
  {
    // columns y, x1, z1, z2 for n = 10, p = 1, k = 2
    std::ofstream out(data_path);
    out << "y,x1,z1,z2\n";
    RandomStream stream(404);
    for (int i = 0; i < 10; ++i) {
      const double x = stream.normal(), z1 = stream.normal(), z2 = stream.normal();
      out << x + 0.5 * z1 + 0.3 * stream.normal() << ',' << x << ',' << z1 << ',' << z2
          << '\n';
    }
  }
  ExperimentConfig config = parse_config(
      "model = linmod\nsampler = linchpin\nn = 500\npilot = 200\nseed = 12\n"
      "model.data = " + data_path + "\n");
  config.out = dir;
  const ExperimentResult result = run_experiment(config);
  CHECK(data_rows(slurp(result.outputs[0])) == 500);

  ExperimentConfig bad = config;
  bad.model_params["data"] = dir + "/missing.csv";
  CHECK_THROWS_AS(run_experiment(bad), ConfigError);
}

TEST_CASE("paired traces show the mixing contrast at high correlation") {
  ExperimentConfig config = parse_config(
      "model = gaussian\nsampler = linchpin\nsampler2 = gibbs\nn = 5000\npilot = 1000\n"
      "seed = 314\nmodel.rho = 0.99\n");
  config.out = temp_dir("fig_contrast");
  const ExperimentResult result = run_compare(config);

  // lag-1 autocorrelation of the trailing coordinate over the final
  // 1000 retained rows: the scan sampler crawls, the composition mixes
  auto tail_lag1 = [](const std::string& path) {
    std::istringstream in(slurp(path));
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> value;
    while (std::getline(in, line)) {
      const auto last_comma = line.find_last_of(',');
      const auto prev_comma = line.find_last_of(',', last_comma - 1);
      value.push_back(std::stod(line.substr(prev_comma + 1, last_comma - prev_comma - 1)));
    }
    value.erase(value.begin(), value.end() - 1000);
    double mean = 0.0;
    for (double v : value) mean += v;
    mean /= static_cast<double>(value.size());
    double c0 = 0.0, c1 = 0.0;
    for (std::size_t i = 0; i < value.size(); ++i) {
      c0 += (value[i] - mean) * (value[i] - mean);
      if (i > 0) c1 += (value[i] - mean) * (value[i - 1] - mean);
    }
    return c1 / c0;
  };
  const double linchpin_lag1 = tail_lag1(result.outputs[0]);
  const double gibbs_lag1 = tail_lag1(result.outputs[1]);
  CHECK(gibbs_lag1 > 0.9);
  CHECK(linchpin_lag1 < 0.8);
  CHECK(gibbs_lag1 - linchpin_lag1 > 0.15);
}
