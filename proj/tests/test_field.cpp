#include <doctest.h>

#include <cmath>

#include "epishape/field.hpp"
#include "epishape/philox.hpp"

using namespace epishape;

TEST_CASE("philox4x32-10 known answers") {
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("uniforms lie strictly inside (0,1)") {
  CHECK(open_unit_interval(0) > 0.0);
  CHECK(open_unit_interval(~std::uint64_t{0}) < 1.0);
}

TEST_CASE("replica seeds differ and are deterministic") {
  CHECK(replica_seed(1, 0) != replica_seed(1, 1));
  CHECK(replica_seed(1, 0) != replica_seed(2, 0));
  CHECK(replica_seed(5, 7) == replica_seed(5, 7));
}

TEST_CASE("recovery laws parse, print and validate") {
  CHECK(RecoveryDist::parse("const:2") == RecoveryDist::constant(2.0));
  CHECK(RecoveryDist::parse("exp:1.5") == RecoveryDist::exponential(1.5));
  CHECK(RecoveryDist::parse("uniform:0.5,1.5") == RecoveryDist::uniform(0.5, 1.5));
  CHECK(RecoveryDist::parse("pareto:1.5,1") == RecoveryDist::pareto(1.5, 1.0));
  CHECK(RecoveryDist::parse(RecoveryDist::uniform(0.25, 2).to_string()) == RecoveryDist::uniform(0.25, 2));
  CHECK_THROWS_AS(RecoveryDist::parse("const:0.0"), ConfigError);
  CHECK_THROWS_AS(RecoveryDist::parse("uniform:2,1"), ConfigError);
  CHECK_THROWS_AS(RecoveryDist::parse("gamma:1"), ConfigError);
  CHECK_THROWS_AS(RecoveryDist::parse("exp"), ConfigError);
}

TEST_CASE("quantiles and moments") {
  const auto e = RecoveryDist::exponential(2.0);
  CHECK(e.quantile(1 - std::exp(-1.0)) == doctest::Approx(2.0));
  CHECK(e.mean() == doctest::Approx(2.0));
  const auto p = RecoveryDist::pareto(2.5, 1.0);
  CHECK(p.quantile(1e-300) == doctest::Approx(1.0));
  CHECK(std::isfinite(p.quantile(open_unit_interval(~std::uint64_t{0}))));
  CHECK(p.has_finite_moment(2.0));
  CHECK_FALSE(p.has_finite_moment(3.0));
  CHECK(RecoveryDist::uniform(1, 3).quantile(0.5) == doctest::Approx(2.0));
}

TEST_CASE("open probability against closed forms") {
  const double l = 0.7;
  CHECK(open_probability(RecoveryDist::constant(2.0), l) == doctest::Approx(1 - std::exp(-1.4)));
  CHECK(open_probability(RecoveryDist::exponential(2.0), l) == doctest::Approx(l * 2 / (1 + l * 2)));
  const double a = 0.5, b = 1.5;
  const double uni = 1 - (std::exp(-l * a) - std::exp(-l * b)) / (l * (b - a));
  CHECK(open_probability(RecoveryDist::uniform(a, b), l) == doctest::Approx(uni));
  const double m2 = 1 - 2 / (1 + l * 2) + 1 / (1 + 2 * l * 2);
  CHECK(open_probability_moment(RecoveryDist::exponential(2.0), l, 2) == doctest::Approx(m2));
}

TEST_CASE("bond state is a function of the clock and the recovery period") {
  FieldConfig cfg;
  cfg.d = 3;
  cfg.lambda = 0.8;
  cfg.recovery = RecoveryDist::exponential(1.0);
  cfg.seed = 42;
  int open = 0;
  for (int i = 0; i < 200; ++i) {
    const OrientedBond b(Site{i, -i, 2 * i}, i % 6);
    CHECK(edge_clock(cfg, b) == doctest::Approx(unit_clock(cfg, b) / cfg.lambda));
    CHECK(is_open(cfg, b) == (edge_clock(cfg, b) < recovery_time(cfg, b.from)));
    CHECK(is_open(cfg, b) == is_open(cfg, b));
    // Larger lambda opens more bonds under the same seed.
    if (is_open(cfg, b)) CHECK(is_open(cfg.with_lambda(1.6), b));
    open += is_open(cfg, b);
  }
  CHECK(open > 0);
  CHECK(open < 200);
}

TEST_CASE("entities are independent streams") {
  const Site x{3, 1, 4};
  const auto r = entity_uniforms(9, EntityKind::recovery, x, 0);
  const auto c = entity_uniforms(9, EntityKind::clock, x, 0);
  const auto c1 = entity_uniforms(9, EntityKind::clock, x, 1);
  const auto other = entity_uniforms(10, EntityKind::clock, x, 0);
  CHECK(r.u1 != c.u1);
  CHECK(c.u1 != c1.u1);
  CHECK(c.u1 != other.u1);
}
