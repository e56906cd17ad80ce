#include <doctest.h>

#include <algorithm>

#include "epishape/cluster.hpp"

using namespace epishape;

namespace {
FieldConfig field(double lambda, std::uint64_t seed, RecoveryDist r = RecoveryDist::constant(1.0)) {
  FieldConfig c;
  c.d = 3;
  c.lambda = lambda;
  c.recovery = r;
  c.seed = seed;
  return c;
}
}  // namespace

TEST_CASE("a tiny rate isolates the origin, a huge rate connects the box") {
  const Box box = Box::centered(3, 3);
  const Site o = Site::origin(3);
  const BoxGraph closed(field(1e-9, 1), box);
  const auto lone = cluster(closed, o, Direction::out, Region::all());
  CHECK(lone.sites == std::vector<Site>{o});
  CHECK_FALSE(lone.touched_boundary);

  const BoxGraph full(field(1e9, 1), box);
  const auto out = cluster(full, o, Direction::out, Region::all());
  CHECK(out.sites.size() == box.volume());
  CHECK(out.touched_boundary);
  CHECK(out.hop(Site{3, 3, 3}) == 9);
  CHECK(chemical_distance(full, o, Site{1, -2, 0}, Region::all()) == 3);
  CHECK(chemical_distance(full, o, o, Region::all()) == 0);
}

TEST_CASE("out and in clusters are related by path reversal") {
  const BoxGraph g(field(0.6, 5), Box::centered(3, 4));
  const Site o = Site::origin(3);
  const auto out = cluster(g, o, Direction::out, Region::all());
  for (const Site& y : out.sites) {
    const auto in = cluster(g, y, Direction::in, Region::all());
    CHECK(in.contains(o));
    CHECK(*in.hop(o) == *out.hop(y));
  }
}

TEST_CASE("regions restrict the path but not the endpoint") {
  const BoxGraph g(field(1e9, 2), Box::centered(3, 3));
  const Site o = Site::origin(3);
  const auto inner = cluster(g, o, Direction::out, Region::box(Box::centered(3, 1)));
  for (const Site& y : inner.sites) CHECK(norm_inf(y) <= 1);
  CHECK(inner.sites.size() == 27);
  // A site just outside is reachable as an endpoint.
  CHECK(chemical_distance(g, o, Site{2, 0, 0}, Region::box(Box::centered(3, 1))) == 2);
  CHECK_FALSE(chemical_distance(g, o, Site{3, 0, 0}, Region::box(Box::centered(3, 1))).has_value());
}

TEST_CASE("hop budget truncates the exploration") {
  const BoxGraph g(field(1e9, 2), Box::centered(3, 3));
  const auto c = cluster(g, Site::origin(3), Direction::out, Region::all(), 1);
  CHECK(c.sites.size() == 7);
}

TEST_CASE("fully open box: every site is in C~ and kappa is small") {
  const BoxGraph g(field(1e9, 3), Box::centered(3, 8));
  const TildeC tc = tilde_c(g);
  CHECK(tc.count() == g.size());
  const Site o = Site::origin(3);
  const auto nb = kappa(g, o, tc, 2);
  CHECK(nb.kappa >= 1);
  CHECK(std::binary_search(nb.V.begin(), nb.V.end(), o));
  CHECK(nb.has_bonds);
  CHECK(u_weight(g, nb) >= 0.0);
  const auto lean = kappa(g, o, tc, 2, false);
  CHECK(lean.kappa == nb.kappa);
  CHECK(lean.V == nb.V);
  CHECK_THROWS_AS(u_weight(g, lean), std::logic_error);
}

TEST_CASE("kappa that cannot fit in the box is a truncation") {
  const BoxGraph g(field(1e-9, 4), Box::centered(3, 3));
  const TildeC tc = tilde_c(g);
  CHECK(tc.count() == 0);
  CHECK_THROWS_AS(kappa(g, Site::origin(3), tc, 8), TruncationError);
}

TEST_CASE("complement regions exclude their sites") {
  const Region r = Region::complement_of(std::vector<Site>{Site{1, 0, 0}});
  CHECK_FALSE(r.contains(Site{1, 0, 0}));
  CHECK(r.contains(Site{0, 0, 0}));
  CHECK(Region::all().contains(Site{99, 0, 0}));
}
