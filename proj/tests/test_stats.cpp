#include <doctest.h>

#include <cmath>
#include <vector>

#include "epishape/stats.hpp"

using namespace epishape;

TEST_CASE("summary statistics") {
  const std::vector<double> xs{1, 2, 3, 4, 10};
  CHECK(mean(xs) == doctest::Approx(4.0));
  CHECK(sample_variance(xs) == doctest::Approx(12.5));
  CHECK(median(xs) == 3.0);
  CHECK(median({1, 2, 3, 4}) == 2.5);
  const auto ci = bootstrap_mean_ci(xs);
  CHECK(ci.contains(4.0));
  CHECK(ci.lo >= 1.0);
  CHECK(bootstrap_mean_ci(xs).lo == ci.lo);
}

TEST_CASE("line fit recovers an exact line") {
  const std::vector<double> x{0, 1, 2, 3, 4};
  std::vector<double> y;
  for (double v : x) y.push_back(1.5 - 0.25 * v);
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(-0.25));
  CHECK(f.intercept == doctest::Approx(1.5));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.slope_se == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("weighted fit favours precise points") {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{0, 1, 2, 10};
  const std::vector<double> w{1e6, 1e6, 1e6, 1e-6};
  const auto f = fit_line(x, y, w);
  CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("tail fits on exact tails") {
  std::vector<TailPoint> exp_pts, pow_pts;
  for (int n = 1; n <= 8; ++n) {
    exp_pts.push_back({double(n), 2.0 * std::exp(-0.7 * n), 0.0});
    pow_pts.push_back({double(n), std::exp(-1.3 * std::cbrt(double(n))), 0.0});
  }
  const auto fe = tail_fit(exp_pts, TailModel::exp_n);
  CHECK(fe.rate == doctest::Approx(0.7));
  CHECK(fe.intercept == doctest::Approx(std::log(2.0)));
  const auto fp = tail_fit(pow_pts, TailModel::exp_n_pow, 3);
  CHECK(fp.rate == doctest::Approx(1.3));
  CHECK(fp.exponent == doctest::Approx(1.0 / 3));
  CHECK(to_string(TailModel::exp_n_pow) == "exp_n_pow");
}

TEST_CASE("tail fit drops empty points and needs four") {
  std::vector<TailPoint> pts{{1, 0.5, 0}, {2, 0.25, 0}, {3, 0.125, 0}, {4, 0.0, 0}, {5, 0.0, 0}};
  CHECK_THROWS_AS(tail_fit(pts, TailModel::exp_n), EstimationError);
  pts.push_back({6, 1.0 / 64, 0});
  const auto f = tail_fit(pts, TailModel::exp_n);
  CHECK(f.points == 4);
  CHECK(f.rate == doctest::Approx(std::log(2.0)));
}

TEST_CASE("empirical survival") {
  const std::vector<std::int64_t> s{1, 1, 2, 3, 5};
  const auto pts = survival_from_samples(s, 4);
  REQUIRE(pts.size() == 4);
  CHECK(pts[0].p == 1.0);
  CHECK(pts[1].p == doctest::Approx(0.6));
  CHECK(pts[2].p == doctest::Approx(0.4));
  CHECK(pts[3].p == doctest::Approx(0.2));
  CHECK(pts[1].se == doctest::Approx(std::sqrt(0.6 * 0.4 / 5)));
}

TEST_CASE("monotone events parse positive DNFs only") {
  const auto e = MonotoneEvent::parse("0,0,0>1,0,0&1,0,0>1,1,0|0,0,0>0,0,1", 3);
  REQUIRE(e.clauses().size() == 2);
  CHECK(e.clauses()[0].size() == 2);
  CHECK(e.clauses()[1][0] == OrientedBond(Site{0, 0, 0}, 5));
  CHECK(MonotoneEvent::parse(e.to_string(), 3).clauses() == e.clauses());
  CHECK_THROWS(MonotoneEvent::parse("!0,0,0>1,0,0", 3));
  CHECK_THROWS(MonotoneEvent::parse("~0,0,0>1,0,0", 3));
  CHECK_THROWS(MonotoneEvent::parse("not 0,0,0>1,0,0", 3));
  CHECK_THROWS(MonotoneEvent::parse("0,0,0>2,0,0", 3));
  CHECK_THROWS(MonotoneEvent::parse("0,0>1,0", 3));
}

TEST_CASE("event evaluation follows the bond states") {
  FieldConfig cfg;
  cfg.d = 2;
  cfg.recovery = RecoveryDist::constant(1.0);
  cfg.lambda = 1e9;
  CHECK(MonotoneEvent::parse("0,0>1,0&1,0>1,1", 2).evaluate(cfg));
  cfg.lambda = 1e-9;
  CHECK_FALSE(MonotoneEvent::parse("0,0>1,0|1,0>1,1", 2).evaluate(cfg));
}

TEST_CASE("same-site covariance for the exponential law") {
  const double l = 1.0, m = 1.0;
  const double p = l * m / (1 + l * m);
  const double p2 = 1 - 2 / (1 + l * m) + 1 / (1 + 2 * l * m);
  CHECK(same_site_covariance(RecoveryDist::exponential(m), l) == doctest::Approx(p2 - p * p));
  CHECK(same_site_covariance(RecoveryDist::constant(1.0), l) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("bisection brackets the half-survival crossing") {
  FieldConfig cfg;
  cfg.d = 2;
  cfg.recovery = RecoveryDist::constant(1.0);
  cfg.seed = 3;
  const auto est = estimate_lambda_c(cfg, 4, 0.1, 200, Parallelism{1});
  for (const auto* b : {&est.out, &est.in}) {
    CHECK(b->hi - b->lo <= 0.1 + 1e-12);
    CHECK(b->p_lo < 0.5);
    CHECK(b->p_hi >= 0.5);
  }
  CHECK(est.midpoint() > 0.0);
}

TEST_CASE("survival curves are monotone in lambda under shared seeds") {
  FieldConfig cfg;
  cfg.d = 2;
  cfg.recovery = RecoveryDist::exponential(1.0);
  cfg.seed = 4;
  double previous = 0.0;
  for (double l : {0.2, 0.5, 1.0, 2.0}) {
    const auto s = survival_probability(cfg.with_lambda(l), 5, Direction::out, 300);
    CHECK(s.p_hat >= previous);
    previous = s.p_hat;
  }
}

TEST_CASE("probe slab contains the box once thick enough") {
  const Slab s = probe_slab(3, 40, 32);
  for (std::int64_t h = -16; h <= 16; ++h) CHECK(s.contains(Site{0, 0, h}));
}
