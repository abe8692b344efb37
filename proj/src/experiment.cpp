#include "linchpin/experiment.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "linchpin/diagnostics.hpp"
#include "linchpin/finite.hpp"
#include "linchpin/models/gaussian_split.hpp"
#include "linchpin/models/linear_model.hpp"
#include "linchpin/models/rosenbrock.hpp"
#include "linchpin/models/spike_slab.hpp"
#include "linchpin/models/var_model.hpp"
#include "linchpin/sampler.hpp"

namespace linchpin {

namespace {

using nlohmann::json;

std::string format_full(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

// Typed access to model.* keys with documented defaults; unknown keys
// are rejected against the model's allow-list.
class ModelParams {
 public:
  explicit ModelParams(const std::map<std::string, std::string>& params) : params_(params) {}

  double number(const std::string& key, double fallback) const {
    const auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config: key 'model." + key + "': expected a number, got '" +
                        it->second + "'");
    }
  }

  long integer(const std::string& key, long fallback) const {
    const double v = number(key, static_cast<double>(fallback));
    const long rounded = static_cast<long>(v);
    if (static_cast<double>(rounded) != v)
      throw ConfigError("config: key 'model." + key + "': expected an integer");
    return rounded;
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    const auto it = params_.find(key);
    return it == params_.end() ? fallback : it->second;
  }

  void allow_only(const std::set<std::string>& keys) const {
    for (const auto& [key, value] : params_)
      if (!keys.count(key))
        throw ConfigError("config: key 'model." + key + "': unknown key");
  }

 private:
  const std::map<std::string, std::string>& params_;
};

struct BuiltRun {
  ChainOutput chain;
  std::optional<AdaptationReport> tuning;
};

ProposalKind proposal_kind(const ExperimentConfig& config) {
  return config.proposal == "gaussian" ? ProposalKind::Gaussian
                                       : ProposalKind::UniformWindow;
}

std::vector<std::string> numbered(const std::string& stem, int count, int from = 1) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) names.push_back(stem + std::to_string(from + i));
  return names;
}

// Pilot-tune a marginal kernel, then run a linchpin chain.
BuiltRun run_tuned_linchpin(const ExperimentConfig& config, const TargetDensity& marginal,
                            const ConditionalSampler& conditional,
                            const Eigen::VectorXd& y0, RandomStream& stream) {
  BuiltRun run;
  run.tuning = tune_scale(marginal, y0, static_cast<int>(config.pilot),
                          default_target_acceptance(marginal.dimension), stream,
                          proposal_kind(config));
  LinchpinSampler sampler{make_rw_mh_kernel(marginal, run.tuning->scale, proposal_kind(config)),
                          conditional};
  Eigen::VectorXd x0 = conditional.draw(y0, stream);
  run.chain = run_chain(sampler, JointState{std::move(x0), y0},
                        static_cast<int>(config.n), stream);
  return run;
}

BuiltRun run_exact_linchpin(const ExperimentConfig& config, TransitionKernel marginal_kernel,
                            const ConditionalSampler& conditional, const Eigen::VectorXd& y0,
                            RandomStream& stream) {
  BuiltRun run;
  LinchpinSampler sampler{std::move(marginal_kernel), conditional};
  Eigen::VectorXd x0 = conditional.draw(y0, stream);
  run.chain =
      run_chain(sampler, JointState{std::move(x0), y0}, static_cast<int>(config.n), stream);
  return run;
}

BuiltRun run_tuned_joint_mh(const ExperimentConfig& config, const TargetDensity& joint,
                            const Eigen::VectorXd& start, RandomStream& stream) {
  BuiltRun run;
  run.tuning = tune_scale(joint, start, static_cast<int>(config.pilot),
                          default_target_acceptance(joint.dimension), stream,
                          proposal_kind(config));
  TransitionKernel kernel = make_rw_mh_kernel(joint, run.tuning->scale, proposal_kind(config));
  run.chain = run_kernel_chain(kernel, start, static_cast<int>(config.n), stream);
  return run;
}

GaussianSplitTarget gaussian_from_params(const ModelParams& params) {
  const int p = static_cast<int>(params.integer("p", 5));
  const int r = static_cast<int>(params.integer("r", 1));
  const double rho = params.number("rho", 0.5);
  return GaussianSplitTarget(Eigen::VectorXd::Zero(p), ar1_correlation(p, rho), r);
}

Eigen::MatrixXd load_csv_matrix(const std::string& path, int expected_cols) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open data file '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    bool numeric = true;
    while (std::getline(fields, field, ',')) {
      try {
        row.push_back(std::stod(field));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first) {  // header row
        first = false;
        continue;
      }
      throw ConfigError("config: non-numeric row in data file '" + path + "'");
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw ConfigError("config: ragged rows in data file '" + path + "'");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("config: empty data file '" + path + "'");
  if (expected_cols > 0 && static_cast<int>(rows.front().size()) != expected_cols)
    throw ConfigError("config: data file '" + path + "' has " +
                      std::to_string(rows.front().size()) + " columns, expected " +
                      std::to_string(expected_cols));
  Eigen::MatrixXd matrix(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j)
      matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return matrix;
}

LinearModelData linmod_from_params(const ModelParams& params) {
  const int n = static_cast<int>(params.integer("n", 10));
  const int p = static_cast<int>(params.integer("p", 1));
  const int k = static_cast<int>(params.integer("k", 2));
  const double e1 = params.number("e1", 1.0), e2 = params.number("e2", 1.0);
  const double r1 = params.number("r1", 1.0), r2 = params.number("r2", 1.0);
  const std::string data_path = params.text("data", "");
  if (!data_path.empty()) {
    // columns: y, x1..xp, z1..zk
    const Eigen::MatrixXd table = load_csv_matrix(data_path, 1 + p + k);
    return LinearModelData(table.col(0), table.middleCols(1, p), table.rightCols(k), e1, e2,
                           r1, r2);
  }
  return synth_linear_model(n, p, k, params.number("lambda_e", 4.0),
                            params.number("lambda_r", 2.0),
                            Eigen::VectorXd::Constant(p, params.number("signal", 1.0)),
                            static_cast<std::uint64_t>(params.integer("data_seed", 1)), e1,
                            e2, r1, r2);
}

SpikeSlabData spikeslab_from_params(const ModelParams& params) {
  const int n = static_cast<int>(params.integer("n", 30));
  const int p = static_cast<int>(params.integer("p", 8));
  const double tau0 = params.number("tau0_sq", 0.01), tau1 = params.number("tau1_sq", 10.0);
  const double q = params.number("q", 0.1);
  const double a1 = params.number("alpha1", 1.0), a2 = params.number("alpha2", 1.0);
  const std::string data_path = params.text("data", "");
  if (!data_path.empty()) {
    // columns: y, x1..xp
    const Eigen::MatrixXd table = load_csv_matrix(data_path, 1 + p);
    return SpikeSlabData(table.col(0), table.rightCols(p), tau0, tau1, q, a1, a2);
  }
  std::vector<int> active;
  const long active_count = params.integer("active", 2);
  for (long i = 0; i < active_count && i < p; ++i) active.push_back(static_cast<int>(i));
  return synth_spike_slab(n, p, active, params.number("signal", 1.5),
                          params.number("sigma", 1.0),
                          static_cast<std::uint64_t>(params.integer("data_seed", 1)), tau0,
                          tau1, q, a1, a2);
}

VarModelData var_from_params(const ModelParams& params) {
  const int r = static_cast<int>(params.integer("r", 2));
  const int p = static_cast<int>(params.integer("p", 1));
  const int lag = static_cast<int>(params.integer("lag", 1));
  const int K = static_cast<int>(params.integer("K", 50));
  const std::string data_path = params.text("data", "");
  VarModelData data = [&]() {
    if (!data_path.empty()) {
      // columns: y1..yr, x1..xp
      const Eigen::MatrixXd table = load_csv_matrix(data_path, r + p);
      return make_var_data(table.leftCols(r), table.rightCols(p), lag);
    }
    VarState truth;
    truth.A = Eigen::MatrixXd::Zero(lag * r, r);
    truth.A.topLeftCorner(r, r) = 0.5 * Eigen::MatrixXd::Identity(r, r);
    truth.B = Eigen::MatrixXd::Constant(p, r, 1.0);
    truth.Sigma = Eigen::MatrixXd::Identity(r, r);
    return synth_var(r, p, lag, K, truth,
                     static_cast<std::uint64_t>(params.integer("data_seed", 1)));
  }();
  data.a = params.number("a", r + 2.0);
  return data;
}

std::vector<std::string> var_component_names(const VarModelData& data) {
  std::vector<std::string> names;
  const int r = data.r();
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < data.lag * r; ++i)
      names.push_back("A." + std::to_string(i + 1) + "." + std::to_string(j + 1));
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < data.p(); ++i)
      names.push_back("B." + std::to_string(i + 1) + "." + std::to_string(j + 1));
  for (int j = 0; j < r; ++j)
    for (int i = j; i < r; ++i)
      names.push_back("Sigma." + std::to_string(i + 1) + "." + std::to_string(j + 1));
  return names;
}

BuiltRun build_and_run(const ExperimentConfig& config, const std::string& sampler_kind,
                       RandomStream stream) {
  const ModelParams params(config.model_params);
  BuiltRun run;

  if (config.model == "rosenbrock") {
    params.allow_only({"form"});
    RosenbrockTarget model{params.text("form", "conditional") == "displayed"};
    if (sampler_kind == "linchpin") {
      Eigen::VectorXd y0 = Eigen::VectorXd::Constant(1, 1.0);
      run = config.marginal == "exact"
                ? run_exact_linchpin(config, model.exact_marginal_kernel(),
                                     model.conditional(), y0, stream)
                : run_tuned_linchpin(config, model.marginal_target(), model.conditional(),
                                     y0, stream);
    } else {  // joint-mh
      run = run_tuned_joint_mh(config, model.joint_target(),
                               Eigen::VectorXd::Constant(2, 1.0), stream);
    }
    run.chain.component_names = {"x", "y"};
    return run;
  }

  if (config.model == "gaussian") {
    params.allow_only({"p", "r", "rho"});
    const GaussianSplitTarget model = gaussian_from_params(params);
    const int p = model.dim();
    if (sampler_kind == "gibbs") {
      TransitionKernel kernel = make_gibbs_kernel(model.two_block_conditionals(), p);
      run.chain =
          run_kernel_chain(kernel, Eigen::VectorXd::Zero(p), static_cast<int>(config.n), stream);
    } else if (sampler_kind == "linchpin") {
      const Eigen::VectorXd y0 = Eigen::VectorXd::Zero(model.split);
      run = config.marginal == "exact"
                ? run_exact_linchpin(config, model.exact_marginal_kernel(),
                                     model.head_given_tail(), y0, stream)
                : run_tuned_linchpin(config, model.marginal_tail_target(),
                                     model.head_given_tail(), y0, stream);
    } else {  // joint-mh
      run = run_tuned_joint_mh(config, model.joint_target(), Eigen::VectorXd::Zero(p), stream);
    }
    run.chain.component_names = numbered("x", p);
    return run;
  }

  if (config.model == "linmod") {
    params.allow_only({"n", "p", "k", "e1", "e2", "r1", "r2", "data", "data_seed",
                       "lambda_e", "lambda_r", "signal"});
    const LinearModelData data = linmod_from_params(params);
    run = run_tuned_linchpin(config, linmod_lambda_target(data), linmod_xi_sampler(data),
                             Eigen::VectorXd::Constant(2, 1.0), stream);
    run.chain.component_names = numbered("beta", data.p());
    for (const auto& name : numbered("u", data.k())) run.chain.component_names.push_back(name);
    run.chain.component_names.push_back("lambda_e");
    run.chain.component_names.push_back("lambda_r");
    return run;
  }

  if (config.model == "spikeslab") {
    params.allow_only({"n", "p", "tau0_sq", "tau1_sq", "q", "alpha1", "alpha2", "active",
                       "signal", "sigma", "data", "data_seed"});
    const SpikeSlabData data = spikeslab_from_params(params);
    LinchpinSampler sampler{make_flip_mh_kernel(spike_slab_z_target(data)),
                            spike_slab_bs_sampler(data)};
    Eigen::VectorXd z0 = Eigen::VectorXd::Zero(data.p());
    Eigen::VectorXd x0 = sampler.conditional.draw(z0, stream);
    run.chain = run_chain(sampler, JointState{std::move(x0), std::move(z0)},
                          static_cast<int>(config.n), stream);
    run.chain.component_names = numbered("beta", data.p());
    run.chain.component_names.push_back("sigma_sq");
    for (const auto& name : numbered("z", data.p())) run.chain.component_names.push_back(name);
    return run;
  }

  // var
  params.allow_only({"r", "p", "lag", "K", "a", "data", "data_seed"});
  const VarModelData data = var_from_params(params);
  VarState start;
  start.A = Eigen::MatrixXd::Zero(data.lag * data.r(), data.r());
  start.B = Eigen::MatrixXd::Zero(data.p(), data.r());
  start.Sigma = Eigen::MatrixXd::Identity(data.r(), data.r());
  const Eigen::VectorXd packed_start = pack_var_state(data, start);
  if (sampler_kind == "collapsed-gibbs") {
    TransitionKernel kernel;
    kernel.dimension = var_packed_size(data);
    kernel.name = "collapsed-gibbs";
    kernel.has_accept_step = false;
    auto shared = std::make_shared<VarModelData>(data);
    kernel.step = [shared](const Eigen::VectorXd& packed, RandomStream& rng) {
      const VarState next =
          var_collapsed_step(*shared, unpack_var_state(*shared, packed), rng);
      return StepResult{pack_var_state(*shared, next), true};
    };
    run.chain = run_kernel_chain(kernel, packed_start, static_cast<int>(config.n), stream);
  } else {  // joint-mh
    run = run_tuned_joint_mh(config, var_joint_target(data), packed_start, stream);
  }
  run.chain.component_names = var_component_names(data);
  return run;
}

void write_trace_csv(const ChainOutput& chain, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << "iter";
  for (Eigen::Index c = 0; c < chain.dim(); ++c)
    out << ','
        << (c < static_cast<Eigen::Index>(chain.component_names.size())
                ? chain.component_names[static_cast<std::size_t>(c)]
                : "c" + std::to_string(c));
  out << ",accepted\n";
  for (Eigen::Index i = 0; i < chain.n(); ++i) {
    out << (i + 1);
    for (Eigen::Index c = 0; c < chain.dim(); ++c) out << ',' << format_full(chain.draws(i, c));
    const int accepted = chain.accept_flags.empty()
                             ? 1
                             : chain.accept_flags[static_cast<std::size_t>(i)];
    out << ',' << accepted << '\n';
  }
  if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

json summary_to_json(const ChainSummary& summary) {
  json j;
  j["n"] = summary.n;
  j["seed"] = summary.seed;
  j["kernel"] = summary.kernel;
  j["acceptance_rate"] = summary.acceptance_rate;
  j["runtime_seconds"] = summary.wall_seconds;
  j["components"] = json::array();
  for (const auto& c : summary.components) {
    json jc;
    jc["name"] = c.name;
    jc["mean"] = c.mean;
    jc["marginal_variance"] = c.marginal_variance;
    jc["asymptotic_variance"] = c.asymptotic_variance;
    jc["ess"] = c.ess;
    jc["mcse"] = c.mcse;
    if (c.acf.size() > 1) jc["acf1"] = c.acf[1];
    j["components"].push_back(jc);
  }
  return j;
}

json tuning_to_json(const AdaptationReport& report) {
  return json{{"scale", report.scale},
              {"acceptance_rate", report.acceptance_rate},
              {"pilot_length", report.pilot_length},
              {"reached_target", report.reached_target}};
}

std::string output_path(const ExperimentConfig& config, const std::string& stem) {
  std::filesystem::create_directories(config.out);
  return (std::filesystem::path(config.out) / stem).string();
}

ChainOutput post_process(const ExperimentConfig& config, ChainOutput chain) {
  if (config.burnin > 0) chain = discard_burnin(chain, static_cast<int>(config.burnin));
  if (config.thin > 1) chain = thin_chain(chain, static_cast<int>(config.thin));
  return chain;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const RandomStream root(config.seed);
  const long replicates = config.replicates;

  std::vector<BuiltRun> runs(static_cast<std::size_t>(replicates));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(replicates));
  auto work = [&](long rep) {
    try {
      runs[static_cast<std::size_t>(rep)] =
          build_and_run(config, config.sampler, root.substream(static_cast<std::uint64_t>(rep)));
    } catch (...) {
      errors[static_cast<std::size_t>(rep)] = std::current_exception();
    }
  };
  if (replicates == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(replicates));
    for (long rep = 0; rep < replicates; ++rep) pool.emplace_back(work, rep);
    for (auto& thread : pool) thread.join();
  }
  for (const auto& error : errors)
    if (error) std::rethrow_exception(error);

  ExperimentResult result;
  json j;
  j["config"] = config.echo();
  j["replicates"] = json::array();
  for (long rep = 0; rep < replicates; ++rep) {
    BuiltRun& run = runs[static_cast<std::size_t>(rep)];
    const ChainOutput retained = post_process(config, run.chain);
    const std::string suffix = replicates == 1 ? "" : "_rep" + std::to_string(rep);
    const std::string csv = output_path(config, config.name + suffix + "_trace.csv");
    write_trace_csv(retained, csv);
    result.outputs.push_back(csv);

    json jr = summary_to_json(summarize(retained));
    jr["trace"] = csv;
    if (run.tuning) jr["tuning"] = tuning_to_json(*run.tuning);
    j["replicates"].push_back(std::move(jr));
  }

  const std::string json_path = output_path(config, config.name + "_summary.json");
  std::ofstream out(json_path, std::ios::binary);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing output file '" + json_path + "'");
  result.outputs.push_back(json_path);
  return result;
}

ExperimentResult run_compare(const ExperimentConfig& config) {
  if (config.sampler2.empty())
    throw ConfigError("config: key 'sampler2': required by the compare command");
  const RandomStream root(config.seed);

  BuiltRun run_a = build_and_run(config, config.sampler, root.substream(0));
  BuiltRun run_b = build_and_run(config, config.sampler2, root.substream(1));
  const ChainOutput chain_a = post_process(config, run_a.chain);
  const ChainOutput chain_b = post_process(config, run_b.chain);

  ExperimentResult result;
  const std::string second_tag =
      config.sampler2 == config.sampler ? config.sampler2 + "2" : config.sampler2;
  const std::string csv_a = output_path(config, config.name + "_" + config.sampler + "_trace.csv");
  const std::string csv_b = output_path(config, config.name + "_" + second_tag + "_trace.csv");
  write_trace_csv(chain_a, csv_a);
  write_trace_csv(chain_b, csv_b);
  result.outputs = {csv_a, csv_b};

  const ChainSummary summary_a = summarize(chain_a);
  const ChainSummary summary_b = summarize(chain_b);

  json j;
  j["config"] = config.echo();
  j["a"] = summary_to_json(summary_a);
  j["a"]["sampler"] = config.sampler;
  j["a"]["trace"] = csv_a;
  if (run_a.tuning) j["a"]["tuning"] = tuning_to_json(*run_a.tuning);
  j["b"] = summary_to_json(summary_b);
  j["b"]["sampler"] = config.sampler2;
  j["b"]["trace"] = csv_b;
  if (run_b.tuning) j["b"]["tuning"] = tuning_to_json(*run_b.tuning);

  json ratios;
  const std::size_t shared =
      std::min(summary_a.components.size(), summary_b.components.size());
  for (std::size_t c = 0; c < shared; ++c) {
    if (summary_a.components[c].name != summary_b.components[c].name) continue;
    if (summary_b.components[c].ess > 0.0)
      ratios[summary_a.components[c].name] =
          summary_a.components[c].ess / summary_b.components[c].ess;
  }
  j["ess_ratio_a_over_b"] = ratios;

  const std::string json_path = output_path(config, config.name + "_compare.json");
  std::ofstream out(json_path, std::ios::binary);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing output file '" + json_path + "'");
  result.outputs.push_back(json_path);
  return result;
}

ExperimentResult run_validators(const ExperimentConfig& config) {
  const ModelParams params(config.model_params);
  constexpr double kTol = 1e-12;
  json j;
  j["config"] = config.echo();
  j["tolerance"] = kTol;
  bool passed = true;

  if (config.model == "rosenbrock") {
    params.allow_only({"form", "grid_nx", "grid_ny", "x_lo", "x_hi", "y_lo", "y_hi", "n_max"});
    RosenbrockTarget model{params.text("form", "conditional") == "displayed"};
    const Eigen::Index nx = params.integer("grid_nx", 6);
    const Eigen::Index ny = params.integer("grid_ny", 5);
    const int n_max = static_cast<int>(params.integer("n_max", 25));
    if (nx * ny > kFiniteStateCap)
      throw ConfigError("config: key 'model.grid_nx': instance exceeds the validator size cap");
    const Grid2d grid = discretize_2d(
        [&model](double x, double y) { return model.log_density(x, y); },
        params.number("x_lo", -1.0), params.number("x_hi", 8.0), nx,
        params.number("y_lo", -2.0), params.number("y_hi", 3.0), ny);

    FiniteChainSpec marginal;
    marginal.stationary = grid.y_marginal;
    marginal.transition = mh_transition_matrix(grid.y_marginal, neighbor_proposal(ny));
    const FiniteChainSpec joint =
        joint_transition_matrix(marginal.transition, marginal.stationary, grid.conditional);

    j["instance"] = "rosenbrock-grid-" + std::to_string(nx) + "x" + std::to_string(ny);
    j["invariance_violation"] = invariance_violation(joint);
    j["detailed_balance_violation"] = detailed_balance_violation(joint);
    j["marginal_detailed_balance_violation"] = detailed_balance_violation(marginal);
    j["same_rate_discrepancy"] = same_rate_discrepancy(joint, marginal, n_max);
    j["x_dependence_violation"] = x_dependence_violation(joint, nx);
    j["tv_curve"] = tv_curve(joint, 0, n_max);
    passed = j["invariance_violation"].get<double>() <= kTol &&
             j["detailed_balance_violation"].get<double>() <= kTol &&
             j["same_rate_discrepancy"].get<double>() <= kTol &&
             j["x_dependence_violation"].get<double>() <= kTol;
  } else if (config.model == "spikeslab") {
    params.allow_only({"n", "p", "tau0_sq", "tau1_sq", "q", "alpha1", "alpha2", "active",
                       "signal", "sigma", "data", "data_seed", "n_max"});
    const SpikeSlabData data = spikeslab_from_params(params);
    const int n_max = static_cast<int>(params.integer("n_max", 60));
    const SpikeSlabPosterior posterior = spike_slab_enumerate(data);

    FiniteChainSpec z_chain;
    z_chain.stationary = posterior.probabilities;
    z_chain.transition = make_flip_mh_kernel(spike_slab_z_target(data)).exact_matrix();

    const std::vector<double> curve = tv_curve(z_chain, 0, n_max);
    bool monotone = true;
    for (std::size_t i = 1; i < curve.size(); ++i)
      if (curve[i] > curve[i - 1] + kTol) monotone = false;

    j["instance"] = "spikeslab-z-chain-p" + std::to_string(data.p());
    j["invariance_violation"] = invariance_violation(z_chain);
    j["detailed_balance_violation"] = detailed_balance_violation(z_chain);
    j["tv_curve"] = curve;
    j["tv_monotone"] = monotone;
    passed = j["invariance_violation"].get<double>() <= kTol &&
             j["detailed_balance_violation"].get<double>() <= kTol && monotone;
  } else {
    throw ConfigError("config: key 'model': validate supports rosenbrock and spikeslab");
  }

  j["passed"] = passed;
  const std::string json_path = output_path(config, config.name + "_validate.json");
  std::ofstream out(json_path, std::ios::binary);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing output file '" + json_path + "'");

  ExperimentResult result;
  result.outputs = {json_path};
  result.passed = passed;
  return result;
}

ExperimentResult run_enumerate(const ExperimentConfig& config) {
  if (config.model != "spikeslab")
    throw ConfigError("config: key 'model': enumerate supports spikeslab only");
  const ModelParams params(config.model_params);
  params.allow_only({"n", "p", "tau0_sq", "tau1_sq", "q", "alpha1", "alpha2", "active",
                     "signal", "sigma", "data", "data_seed"});
  const SpikeSlabData data = spikeslab_from_params(params);
  const SpikeSlabPosterior posterior = spike_slab_enumerate(data);
  const int p = data.p();

  ExperimentResult result;
  const std::string csv = output_path(config, config.name + "_posterior.csv");
  {
    std::ofstream out(csv, std::ios::binary);
    out << "model";
    for (int i = 1; i <= p; ++i) out << ",z" << i;
    out << ",probability,log_weight\n";
    for (Eigen::Index bits = 0; bits < posterior.probabilities.size(); ++bits) {
      out << bits;
      for (int i = 0; i < p; ++i) out << ',' << ((bits >> i) & 1);
      out << ',' << format_full(posterior.probabilities[bits]) << ','
          << format_full(posterior.log_weights[static_cast<std::size_t>(bits)]) << '\n';
    }
    if (!out) throw std::runtime_error("failed writing output file '" + csv + "'");
  }
  result.outputs.push_back(csv);

  json j;
  j["config"] = config.echo();
  j["models"] = posterior.probabilities.size();
  j["inclusion_probabilities"] = std::vector<double>(
      posterior.inclusion.data(), posterior.inclusion.data() + posterior.inclusion.size());
  const std::string json_path = output_path(config, config.name + "_enumerate.json");
  std::ofstream out(json_path, std::ios::binary);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing output file '" + json_path + "'");
  result.outputs.push_back(json_path);
  return result;
}

}  // namespace linchpin
