#include <doctest.h>

#include <set>

#include "epishape/lattice.hpp"

using namespace epishape;

TEST_CASE("site arithmetic and norms") {
  const Site x{1, -2, 3};
  CHECK(x.d == 3);
  CHECK(norm1(x) == 6);
  CHECK(norm_inf(x) == 3);
  CHECK(x + Site{-1, 2, -3} == Site::origin(3));
  CHECK(x.scaled(2) == Site{2, -4, 6});
  CHECK(Site::unit(3, 1, -1) == Site{0, -1, 0});
  CHECK(to_string(x) == "(1,-2,3)");
}

TEST_CASE("directions pair up with their reverses") {
  for (int d = 2; d <= 4; ++d) {
    const Site o = Site::origin(d);
    for (int dir = 0; dir < direction_count(d); ++dir) {
      const Site y = step(o, dir);
      CHECK(norm1(y) == 1);
      CHECK(y[direction_axis(dir)] == direction_sign(dir));
      CHECK(step(y, reverse_direction(dir)) == o);
      const OrientedBond b(o, dir);
      CHECK(b.reversed().reversed() == b);
      CHECK(OrientedBond::between(o, y) == b);
    }
  }
  CHECK_THROWS_AS(OrientedBond::between(Site{0, 0}, Site{1, 1}), std::invalid_argument);
}

TEST_CASE("dimension outside 2..4 is rejected") {
  CHECK_THROWS(check_dimension(1));
  CHECK_THROWS(check_dimension(5));
  CHECK_NOTHROW(check_dimension(4));
}

TEST_CASE("box sites are lexicographic and the boundary is the outer shell") {
  const Box b = Box::centered(2, 2);
  const auto all = box_sites(b);
  CHECK(all.size() == b.volume());
  CHECK(all.size() == 25);
  CHECK(std::is_sorted(all.begin(), all.end()));
  const auto shell = box_boundary(b);
  CHECK(shell.size() == 16);
  for (const auto& y : shell) CHECK(b.on_boundary(y));
  CHECK(b.contains(Site{2, -2}));
  CHECK_FALSE(b.contains(Site{3, 0}));
}

TEST_CASE("exterior vertex boundary of a single site is its neighbourhood") {
  const std::vector<Site> a{Site::origin(3)};
  const auto ext = exterior_vertex_boundary(a);
  CHECK(ext.size() == 6);
  const auto nb = neighbors(Site::origin(3));
  CHECK(std::set<Site>(ext.begin(), ext.end()) == std::set<Site>(nb.begin(), nb.end()));
}

TEST_CASE("slab and cone membership") {
  const Slab s{2, 2, -1};
  CHECK(s.contains(Site{5, 5, -1}));
  CHECK(s.contains(Site{0, 0, 1}));
  CHECK_FALSE(s.contains(Site{0, 0, 2}));
  const Cone c{{1.0, 0.0}, 0.5};
  CHECK(c.contains(Site{4, 2}));
  CHECK_FALSE(c.contains(Site{-1, 0}));
}
