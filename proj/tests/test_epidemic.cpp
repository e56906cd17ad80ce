#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "epishape/epidemic.hpp"

using namespace epishape;

namespace {
FieldConfig field(double lambda, std::uint64_t seed, int d = 3) {
  FieldConfig c;
  c.d = d;
  c.lambda = lambda;
  c.recovery = RecoveryDist::exponential(1.0);
  c.seed = seed;
  return c;
}
}  // namespace

TEST_CASE("origin is infected at time zero and recovers after its period") {
  const FieldConfig cfg = field(1.0, 3);
  const auto run = run_epidemic(cfg, Box::centered(3, 4), kInfinity);
  const Site o = Site::origin(3);
  CHECK(run.infection_time(o) == 0.0);
  CHECK(run.recovery_time(o) == doctest::Approx(recovery_time(cfg, o)));
}

TEST_CASE("infection times are passage times from the origin") {
  const BoxGraph g(field(1.2, 8), Box::centered(3, 4));
  const auto run = run_epidemic(g, kInfinity);
  for (const Site& y : box_sites(g.box())) {
    CHECK(run.infection_time(y) == passage_time(g, Site::origin(3), y));
    if (run.infection_time(y) < kInfinity)
      CHECK(run.recovery_time(y) == doctest::Approx(run.infection_time(y) + g.recovery(g.index(y))));
  }
}

TEST_CASE("snapshots split the ever-infected set into infectious and immune") {
  const auto run = run_epidemic(field(1.5, 11), Box::centered(3, 6), 4.0);
  std::size_t previous = 0;
  for (double t : {0.0, 1.0, 2.0, 3.0, 4.0}) {
    const auto s = run.snapshot(t);
    const auto by = run.infected_by(t);
    // xi: immune, zeta: infectious
    CHECK(s.xi.size() + s.zeta.size() == by.size());
    CHECK(by.size() >= previous);
    previous = by.size();
    for (const Site& y : s.xi) CHECK(run.recovery_time(y) <= t);
    for (const Site& y : s.zeta) CHECK(run.recovery_time(y) > t);
  }
}

TEST_CASE("horizon cuts later infections") {
  const FieldConfig cfg = field(2.0, 5);
  const Box box = Box::centered(3, 5);
  const auto full = run_epidemic(cfg, box, kInfinity);
  const auto cut = run_epidemic(cfg, box, 1.0);
  for (const Site& y : box_sites(box)) {
    if (full.infection_time(y) <= 1.0) {
      CHECK(cut.infection_time(y) == full.infection_time(y));
    } else {
      CHECK(cut.infection_time(y) == kInfinity);
    }
  }
}

TEST_CASE("trajectory CSV lists infected sites with coordinate columns") {
  const auto run = run_epidemic(field(1.0, 2, 2), Box::centered(2, 3), 2.0);
  std::ostringstream os;
  run.write_csv(os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "x1,x2,infection_time,recovery_time");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
  }
  CHECK(rows == run.ever_infected());
  CHECK(rows >= 1);
}

TEST_CASE("tau_hat is zero between a site and itself") {
  FieldConfig cfg = field(1e9, 1);
  cfg.recovery = RecoveryDist::constant(1.0);
  const BoxGraph g(cfg, Box::centered(3, 8));
  const TildeC tc = tilde_c(g);
  CHECK(tau_hat(g, Site::origin(3), Site::origin(3), tc, 2) == 0.0);
  CHECK(tau_hat(g, Site::origin(3), Site{1, 0, 0}, tc, 2) >= 0.0);
}
