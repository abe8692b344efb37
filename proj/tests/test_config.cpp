#include "doctest.h"

#include <string>

#include "linchpin/config.hpp"

using namespace linchpin;

TEST_CASE("minimal config fills documented defaults") {
  const ExperimentConfig config =
      parse_config("model = rosenbrock\nsampler = linchpin\nn = 1000\nseed = 7\n");
  CHECK(config.model == "rosenbrock");
  CHECK(config.sampler == "linchpin");
  CHECK(config.n == 1000);
  CHECK(config.seed == 7);
  CHECK(config.burnin == 0);
  CHECK(config.thin == 1);
  CHECK(config.pilot == 1000);
  CHECK(config.replicates == 1);
  CHECK(config.marginal == "mh");
  CHECK(config.proposal == "uniform");
  CHECK(config.name == "rosenbrock-linchpin");
}

TEST_CASE("comments, blanks, and dotted model keys parse") {
  const ExperimentConfig config = parse_config(
      "# a comment\n"
      "model = gaussian\n"
      "\n"
      "sampler = gibbs   # trailing comment\n"
      "n = 50\n"
      "model.rho = 0.99\n"
      "model.p = 5\n");
  CHECK(config.model_params.at("rho") == "0.99");
  CHECK(config.model_params.at("p") == "5");
}

TEST_CASE("violations name the offending key") {
  const std::string base = "model = rosenbrock\nsampler = linchpin\n";
  CHECK_THROWS_WITH_AS(parse_config(base + "n = 10\nthin = 0\n"),
                       doctest::Contains("thin"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(base + "n = 0\n"), doctest::Contains("'n'"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(base + "n = 10\nburnin = 10\n"),
                       doctest::Contains("burnin"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("model = rosenbrock\nsampler = gibbs\nn = 10\n"),
                       doctest::Contains("not supported"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(base + "n = 10\nbogus = 1\n"),
                       doctest::Contains("bogus"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(base + "n = ten\n"), doctest::Contains("line 3"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(base + "n = 10\nn = 20\n"),
                       doctest::Contains("duplicate"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("sampler = linchpin\nn = 10\n"),
                       doctest::Contains("model"), ConfigError);
}

TEST_CASE("unsupported pairings are rejected early") {
  CHECK(combination_supported("gaussian", "gibbs"));
  CHECK(combination_supported("var", "collapsed-gibbs"));
  CHECK_FALSE(combination_supported("rosenbrock", "gibbs"));
  CHECK_FALSE(combination_supported("linmod", "collapsed-gibbs"));
  CHECK_FALSE(combination_supported("spikeslab", "joint-mh"));
}

TEST_CASE("echo round-trips through the parser") {
  const ExperimentConfig config = parse_config(
      "model = gaussian\nsampler = linchpin\nsampler2 = gibbs\nn = 500\nburnin = 100\n"
      "thin = 2\nseed = 99\nmodel.rho = 0.5\nname = demo\n");
  const ExperimentConfig reparsed = parse_config(config.serialize());
  CHECK(reparsed.model == config.model);
  CHECK(reparsed.sampler == config.sampler);
  CHECK(reparsed.sampler2 == config.sampler2);
  CHECK(reparsed.n == config.n);
  CHECK(reparsed.burnin == config.burnin);
  CHECK(reparsed.thin == config.thin);
  CHECK(reparsed.seed == config.seed);
  CHECK(reparsed.name == config.name);
  CHECK(reparsed.model_params == config.model_params);
  CHECK(reparsed.echo() == config.echo());
}
