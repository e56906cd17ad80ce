#include <doctest.h>

#include <string>

#include "epishape/config.hpp"

using namespace epishape;

TEST_CASE("minimal file needs only the recovery law") {
  const auto cfg = parse_config("recovery = exp:1.0\n");
  CHECK(cfg.recovery == RecoveryDist::exponential(1.0));
  CHECK(cfg.d == 3);
  CHECK(cfg.lambda == 1.0);
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.field().recovery == RecoveryDist::exponential(1.0));
  CHECK(cfg.z_site() == Site::unit(3, 0));
}

TEST_CASE("missing recovery law is an error when the field is needed") {
  const auto cfg = parse_config("d = 2\n");
  CHECK_THROWS_AS(cfg.field(), ConfigError);
}

TEST_CASE("sections, quotes and list values") {
  const auto cfg = parse_config(
      "[field]\nd = 2\nlambda = 0.75\nrecovery = \"uniform:0.5,1.5\"\n"
      "[experiment]\nL = 12\nn_ladder = 2,4,8\nt_ladder = 1.5,3\nz = 1,1\nseed = 9\n");
  CHECK(cfg.d == 2);
  CHECK(cfg.lambda == 0.75);
  CHECK(cfg.recovery == RecoveryDist::uniform(0.5, 1.5));
  CHECK(cfg.box_radius == 12);
  CHECK(cfg.n_ladder == std::vector<std::int64_t>{2, 4, 8});
  CHECK(cfg.t_ladder == std::vector<double>{1.5, 3.0});
  CHECK(cfg.z_site() == Site{1, 1});
  CHECK(cfg.seed == 9);
}

TEST_CASE("degenerate recovery law is rejected") {
  CHECK_THROWS_AS(parse_config("recovery = const:0.0\n"), ConfigError);
}

TEST_CASE("unknown keys are listed together") {
  try {
    parse_config("recovery = exp:1\nlambdaa = 2\nfoo = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("lambdaa") != std::string::npos);
    CHECK(what.find("foo") != std::string::npos);
  }
}

TEST_CASE("type mismatch names the key") {
  try {
    parse_config("recovery = exp:1\nd = x\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("'d'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("recovery = exp:1\nreplicas = -3\n"), ConfigError);
}

TEST_CASE("later values override earlier ones, as flags override the file") {
  auto cfg = parse_config("recovery = exp:1\nlambda = 0.5\n");
  set_config_value(cfg, "lambda", "2.5");
  CHECK(cfg.lambda == 2.5);
  CHECK_THROWS_AS(set_config_value(cfg, "nope", "1"), ConfigError);
}

TEST_CASE("validation catches out-of-range values") {
  auto cfg = parse_config("recovery = exp:1\n");
  cfg.d = 5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = parse_config("recovery = exp:1\n");
  cfg.eps = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = parse_config("recovery = exp:1\n");
  cfg.z = {1, 0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("hash ignores output location and thread count") {
  auto a = parse_config("recovery = exp:1\n");
  auto b = a;
  b.out = "/elsewhere";
  b.jobs = 4;
  CHECK(a.hash() == b.hash());
  b.seed = 2;
  CHECK(a.hash() != b.hash());
  for (const char* key : {"d=", "lambda=", "recovery=", "seed=", "replicas="})
    CHECK(a.canonical().find(key) != std::string::npos);
}
