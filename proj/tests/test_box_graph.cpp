#include <doctest.h>

#include "epishape/box_graph.hpp"

using namespace epishape;

namespace {
FieldConfig cfg3(std::uint64_t seed) {
  FieldConfig c;
  c.d = 3;
  c.lambda = 0.9;
  c.recovery = RecoveryDist::exponential(1.0);
  c.seed = seed;
  return c;
}
}  // namespace

TEST_CASE("index and site round trip") {
  const BoxGraph g(cfg3(1), Box(Site{1, -1, 0}, 2));
  CHECK(g.size() == 125);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g.index(g.site(i)) == i);
    for (int a = 0; a < 3; ++a) CHECK(g.coord(i, a) == g.site(i)[a]);
    CHECK(g.radius_of(i) == norm_inf(g.site(i) - Site{1, -1, 0}));
  }
  CHECK_THROWS_AS(g.index(Site{9, 9, 9}), std::out_of_range);
}

TEST_CASE("neighbours step inside the box and stop at the wall") {
  const BoxGraph g(cfg3(1), Box::centered(3, 2));
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int dir = 0; dir < 6; ++dir) {
      const Site y = step(g.site(i), dir);
      const std::size_t j = g.neighbor(i, dir);
      if (g.contains(y)) {
        CHECK(j == g.index(y));
      } else {
        CHECK(j == BoxGraph::npos);
      }
    }
  }
}

TEST_CASE("lazy, serial and parallel fills agree with the field") {
  const FieldConfig cfg = cfg3(7);
  const Box box = Box::centered(3, 3);
  BoxGraph lazy(cfg, box), serial(cfg, box), parallel(cfg, box);
  CHECK_FALSE(lazy.filled(0));
  serial.materialize_serial();
  parallel.materialize();
  for (std::size_t i = 0; i < lazy.size(); ++i) {
    CHECK(parallel.filled(i));
    CHECK(lazy.out_mask(i) == serial.out_mask(i));
    CHECK(parallel.out_mask(i) == serial.out_mask(i));
    CHECK(lazy.recovery(i) == recovery_time(cfg, lazy.site(i)));
    for (int dir = 0; dir < 6; ++dir) {
      const OrientedBond b(lazy.site(i), dir);
      CHECK(lazy.open(i, dir) == is_open(cfg, b));
      CHECK(lazy.clock(i, dir) == edge_clock(cfg, b));
      const std::size_t j = lazy.neighbor(i, dir);
      if (j != BoxGraph::npos) CHECK(lazy.open_into(i, dir) == lazy.open(j, reverse_direction(dir)));
    }
  }
}

TEST_CASE("the graph works in d = 2 and d = 4") {
  for (int d : {2, 4}) {
    FieldConfig c = cfg3(3);
    c.d = d;
    BoxGraph g(c, Box::centered(d, 2));
    g.materialize();
    const std::size_t o = g.index(Site::origin(d));
    for (int dir = 0; dir < 2 * d; ++dir) CHECK(g.open(o, dir) == is_open(c, OrientedBond(Site::origin(d), dir)));
  }
}
