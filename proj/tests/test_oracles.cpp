#include <doctest.h>

#include "oracles/checks.hpp"

using namespace epishape;

namespace {

void require(const checks::Outcome& o) {
  INFO(o.first_failure);
  CHECK(o.failures == 0);
  CHECK(o.cases > 0);
}

}  // namespace

TEST_CASE("event epidemic matches dijkstra") {
  require(checks::oracle_equivalence(2, 12));
  require(checks::oracle_equivalence(3, 12));
}

TEST_CASE("small boxes match brute force") {
  require(checks::small_box_oracles(2, 3, 8));
  require(checks::small_box_oracles(3, 2, 4));
}

TEST_CASE("coupling is monotone") { require(checks::coupling_monotonicity(2000, 6)); }

TEST_CASE("neighbourhood inequalities") {
  require(checks::subadditivity(40));
  require(checks::passage_sandwich(40));
}

TEST_CASE("growth nesting and serial reference") {
  require(checks::growth_nesting(4));
  require(checks::serial_parallel_agreement(6));
}
