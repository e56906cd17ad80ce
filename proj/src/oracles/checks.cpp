#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "epishape/box_graph.hpp"
#include "epishape/cluster.hpp"
#include "epishape/epidemic.hpp"
#include "epishape/philox.hpp"
#include "epishape/replicas.hpp"
#include "oracles.hpp"

namespace epishape::checks {

namespace {

const RecoveryDist kLaws[] = {RecoveryDist::constant(1.0), RecoveryDist::exponential(1.0),
                              RecoveryDist::uniform(0.5, 1.5), RecoveryDist::pareto(1.5, 0.5)};

FieldConfig config_for(int d, std::uint64_t seed, double lambda, std::size_t law) {
  FieldConfig cfg;
  cfg.d = d;
  cfg.lambda = lambda;
  cfg.recovery = kLaws[law % std::size(kLaws)];
  cfg.seed = seed;
  return cfg;
}

Site random_site(std::mt19937_64& rng, int d, std::int64_t r) {
  std::uniform_int_distribution<std::int64_t> coord(-r, r);
  Site s = Site::origin(d);
  for (int i = 0; i < d; ++i) s.c[i] = coord(rng);
  return s;
}

std::string where(const FieldConfig& cfg, const std::string& what) {
  return what + " (seed " + std::to_string(cfg.seed) + ", lambda " + std::to_string(cfg.lambda) + ", " +
         cfg.recovery.to_string() + ")";
}

bool within_slack(double lhs, double rhs) { return lhs <= rhs || lhs <= rhs * (1.0 + kSumSlack); }

}  // namespace

Outcome oracle_equivalence(int d, std::size_t seeds, std::int64_t radius, std::uint64_t base_seed) {
  Outcome out;
  const double lambdas[] = {0.5, 1.0, 2.0, 4.0};
  const Box box = Box::centered(d, radius);
  const auto sites = box_sites(box);
  for (std::size_t s = 0; s < seeds; ++s) {
    const FieldConfig cfg = config_for(d, replica_seed(base_seed, s), lambdas[s % 4], s / 4);
    const auto fast = run_epidemic(cfg, box, kInfinity);
    const auto slow = oracle::event_epidemic(cfg, box, kInfinity);
    ++out.cases;
    for (const auto& x : sites) {
      const auto it = slow.find(x);
      const double want = it == slow.end() ? kInfinity : it->second;
      if (fast.infection_time(x) != want) {
        out.fail(where(cfg, "infection time of " + to_string(x)));
        break;
      }
    }
    std::mt19937_64 rng(cfg.seed);
    const Site from = random_site(rng, d, radius);
    BoxGraph g(cfg, box);
    const std::size_t src[] = {g.index(from)};
    const auto dij = passage_times_from(g, src);
    const auto bf = oracle::relaxed_passage_times(cfg, box, from);
    ++out.cases;
    for (const auto& [y, t] : bf) {
      if (dij[g.index(y)] != t) {
        out.fail(where(cfg, "passage time " + to_string(from) + " -> " + to_string(y)));
        break;
      }
    }
  }
  return out;
}

Outcome small_box_oracles(int d, std::int64_t radius, std::size_t seeds, std::uint64_t base_seed) {
  Outcome out;
  const double lambdas[] = {0.6, 1.0, 1.5, 3.0};
  const Box box = Box::centered(d, radius);
  const auto sites = box_sites(box);
  for (std::size_t s = 0; s < seeds; ++s) {
    const FieldConfig cfg = config_for(d, replica_seed(base_seed, 1000 + s), lambdas[s % 4], s / 4);
    BoxGraph g(cfg, box);
    std::mt19937_64 rng(cfg.seed);

    // regions: everything, an inner box, and the complement of a random set
    std::vector<Site> holes;
    std::bernoulli_distribution hole(0.2);
    for (const auto& x : sites) {
      if (hole(rng)) holes.push_back(x);
    }
    const std::vector<Region> regions = {Region::all(), Region::box(Box::centered(d, radius - 1)),
                                         Region::complement_of(holes)};
    for (const auto& region : regions) {
      oracle::SiteSet allowed;
      for (const auto& x : sites) {
        if (region.contains(x)) allowed.insert(x);
      }
      for (const auto& x : sites) {
        for (Direction dir : {Direction::out, Direction::in}) {
          ++out.cases;
          const auto rep = cluster(g, x, dir, region);
          auto want = oracle::hop_layers(cfg, box, x, allowed, dir == Direction::in);
          std::erase_if(want, [&](const auto& kv) { return !allowed.count(kv.first); });
          if (dir == Direction::out && !allowed.count(x)) want.clear();
          bool same = rep.sites.size() == want.size();
          for (std::size_t i = 0; same && i < rep.sites.size(); ++i) {
            const auto it = want.find(rep.sites[i]);
            same = it != want.end() && it->second == rep.hops[i];
          }
          if (!same) out.fail(where(cfg, "cluster of " + to_string(x)));
        }
        ++out.cases;
        const auto hops = allowed.count(x) ? oracle::hop_layers(cfg, box, x, allowed, false)
                                           : std::map<Site, std::int64_t>{{x, 0}};
        for (const auto& y : sites) {
          const auto got = chemical_distance(g, x, y, region);
          const auto it = hops.find(y);
          const std::optional<std::int64_t> want =
              it == hops.end() ? std::nullopt : std::optional<std::int64_t>(it->second);
          if (got != want) {
            out.fail(where(cfg, "D(" + to_string(x) + ", " + to_string(y) + ")"));
            break;
          }
        }
      }
    }

    ++out.cases;
    const TildeC tc = tilde_c(g);
    const auto tc_sites = tc.sites();
    const oracle::SiteSet tc_want = oracle::tilde_c_by_site(cfg, box);
    if (oracle::SiteSet(tc_sites.begin(), tc_sites.end()) != tc_want) out.fail(where(cfg, "C~ membership"));

    for (const auto& x : sites) {
      ++out.cases;
      const RootPair rp = roots(g, x, tc);
      const auto ro = oracle::roots_by_paths(cfg, box, x, tc_want, false);
      const auto ri = oracle::roots_by_paths(cfg, box, x, tc_want, true);
      if (oracle::SiteSet(rp.out.begin(), rp.out.end()) != ro || oracle::SiteSet(rp.in.begin(), rp.in.end()) != ri) {
        out.fail(where(cfg, "roots of " + to_string(x)));
        continue;
      }
      bool touches = false;
      for (const auto* set : {&ro, &ri}) {
        for (const auto& y : *set) touches = touches || box.on_boundary(y);
      }
      if (touches != rp.truncated) out.fail(where(cfg, "root truncation flag of " + to_string(x)));

      for (std::int64_t c_prime : {2, 3}) {
        if (kappa_limit(g, x, c_prime) < 1) continue;
        ++out.cases;
        std::optional<std::int64_t> got;
        std::vector<Site> got_v;
        try {
          const auto nb = kappa(g, x, tc, c_prime);
          got = nb.kappa;
          got_v = nb.V;
        } catch (const TruncationError&) {
        }
        const auto want = touches ? std::nullopt : oracle::kappa_by_definition(cfg, box, x, tc_want, c_prime);
        if (got != want) {
          out.fail(where(cfg, "kappa of " + to_string(x)));
          continue;
        }
        if (want) {
          std::vector<Site> v;
          for (const auto& y : box_sites(Box(x, *want))) {
            if (tc_want.count(y)) v.push_back(y);
          }
          if (v != got_v) out.fail(where(cfg, "V of " + to_string(x)));
        }
      }
    }
  }
  return out;
}

Outcome coupling_monotonicity(std::size_t bonds, std::size_t trajectories, std::uint64_t base_seed) {
  Outcome out;
  std::mt19937_64 rng(base_seed);
  std::uniform_real_distribution<double> lam(0.05, 5.0);
  for (std::size_t b = 0; b < bonds; ++b) {
    const int d = 2 + static_cast<int>(b % 3);
    double l1 = lam(rng), l2 = lam(rng);
    if (l1 > l2) std::swap(l1, l2);
    const FieldConfig lo = config_for(d, rng(), l1, b);
    const FieldConfig hi = lo.with_lambda(l2);
    const OrientedBond bond{random_site(rng, d, 1000), static_cast<int>(rng() % static_cast<unsigned>(2 * d))};
    ++out.cases;
    if ((is_open(lo, bond) && !is_open(hi, bond)) || edge_clock(hi, bond) > edge_clock(lo, bond)) {
      out.fail(where(lo, "bond " + to_string(bond.from) + " dir " + std::to_string(bond.dir)));
    }
  }
  for (std::size_t t = 0; t < trajectories; ++t) {
    const int d = 2 + static_cast<int>(t % 2);
    double l1 = lam(rng), l2 = lam(rng);
    if (l1 > l2) std::swap(l1, l2);
    const FieldConfig lo = config_for(d, rng(), l1, t);
    const Box box = Box::centered(d, d == 2 ? 12 : 6);
    const auto a = run_epidemic(lo, box, kInfinity);
    const auto b = run_epidemic(lo.with_lambda(l2), box, kInfinity);
    ++out.cases;
    for (std::size_t i = 0; i < a.infection_times().size(); ++i) {
      if (b.infection_times()[i] > a.infection_times()[i]) {
        out.fail(where(lo, "infection time increased with lambda"));
        break;
      }
    }
  }
  return out;
}

namespace {

constexpr int kSandwichDim = 3;
constexpr std::int64_t kSandwichBox = 12;
constexpr std::int64_t kSandwichCPrime = 3;
constexpr std::int64_t kSampleRadius = 3;

}  // namespace

Outcome subadditivity(std::size_t samples, std::uint64_t base_seed) {
  Outcome out;
  const Box box = Box::centered(kSandwichDim, kSandwichBox);
  for (std::size_t s = 0; out.cases < samples && s < 20 * samples; ++s) {
    const FieldConfig cfg = config_for(kSandwichDim, replica_seed(base_seed, 5000 + s), 1.0 + static_cast<double>(s % 3), s);
    std::mt19937_64 rng(cfg.seed);
    BoxGraph g(cfg, box);
    const TildeC tc = tilde_c(g);
    const Site x = random_site(rng, kSandwichDim, kSampleRadius);
    const Site y = random_site(rng, kSandwichDim, kSampleRadius);
    const Site z = random_site(rng, kSandwichDim, kSampleRadius);
    try {
      const auto nx = kappa(g, x, tc, kSandwichCPrime);
      const auto ny = kappa(g, y, tc, kSandwichCPrime);
      const auto nz = kappa(g, z, tc, kSandwichCPrime);
      ++out.cases;
      const double lhs = tau_hat(g, nx, nz);
      const double rhs = tau_hat(g, nx, ny) + u_weight(g, ny) + tau_hat(g, ny, nz);
      if (!within_slack(lhs, rhs)) {
        out.fail(where(cfg, "tau_hat(x,z) > tau_hat(x,y) + u(y) + tau_hat(y,z) for x=" + to_string(x) +
                                " y=" + to_string(y) + " z=" + to_string(z)));
      }
    } catch (const TruncationError&) {
      ++out.skipped;
    }
  }
  return out;
}

Outcome passage_sandwich(std::size_t samples, std::uint64_t base_seed) {
  Outcome out;
  const Box box = Box::centered(kSandwichDim, kSandwichBox);
  for (std::size_t s = 0; out.cases < samples && s < 20 * samples; ++s) {
    const FieldConfig cfg = config_for(kSandwichDim, replica_seed(base_seed, 9000 + s), 1.0 + static_cast<double>(s % 3), s);
    std::mt19937_64 rng(cfg.seed);
    BoxGraph g(cfg, box);
    const TildeC tc = tilde_c(g);
    const Site x = random_site(rng, kSandwichDim, kSampleRadius);
    const Site y = random_site(rng, kSandwichDim, kSampleRadius);
    const auto cx = cluster(g, x, Direction::out, Region::all());
    const auto rx = roots(g, x, tc);
    if (!cx.contains(y) || std::binary_search(rx.out.begin(), rx.out.end(), y)) {
      ++out.skipped;
      continue;
    }
    try {
      const auto nx = kappa(g, x, tc, kSandwichCPrime);
      const auto ny = kappa(g, y, tc, kSandwichCPrime);
      ++out.cases;
      const double th = tau_hat(g, nx, ny);
      const double t = passage_time(g, x, y);
      const double upper = u_weight(g, nx) + th + u_weight(g, ny);
      if (!within_slack(th, t) || !within_slack(t, upper)) {
        out.fail(where(cfg, "tau_hat <= tau <= u + tau_hat + u fails for x=" + to_string(x) + " y=" + to_string(y)));
      }
    } catch (const TruncationError&) {
      --out.cases;
      ++out.skipped;
    }
  }
  return out;
}

Outcome growth_nesting(std::size_t seeds, std::uint64_t base_seed) {
  Outcome out;
  for (std::size_t s = 0; s < seeds; ++s) {
    const int d = 2 + static_cast<int>(s % 2);
    const FieldConfig cfg = config_for(d, replica_seed(base_seed, 20000 + s), 2.0, s);
    const Box box = Box::centered(d, 8);
    const auto full = run_epidemic(cfg, box, kInfinity);
    std::vector<Site> prev;
    for (double t : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      ++out.cases;
      const auto now = full.infected_by(t);
      if (!std::includes(now.begin(), now.end(), prev.begin(), prev.end())) out.fail(where(cfg, "infected set shrank"));
      const auto cut = run_epidemic(cfg, box, t);
      if (cut.infected_by(t) != now) out.fail(where(cfg, "horizon changes infection times"));
      prev = now;
    }
  }
  return out;
}

Outcome serial_parallel_agreement(std::size_t seeds, std::uint64_t base_seed) {
  Outcome out;
  for (std::size_t s = 0; s < seeds; ++s) {
    const int d = 2 + static_cast<int>(s % 3);
    const FieldConfig cfg = config_for(d, replica_seed(base_seed, 30000 + s), 1.0, s);
    const Box box = Box::centered(d, d == 4 ? 3 : 6);
    BoxGraph a(cfg, box), b(cfg, box), lazy(cfg, box);
    a.materialize();
    b.materialize_serial();
    ++out.cases;
    for (std::size_t i = 0; i < a.size(); ++i) {
      bool same = a.out_mask(i) == b.out_mask(i) && a.recovery(i) == b.recovery(i) && a.out_mask(i) == lazy.out_mask(i);
      for (int dir = 0; same && dir < a.directions(); ++dir) same = a.clock(i, dir) == b.clock(i, dir);
      if (!same) {
        out.fail(where(cfg, "materialised field differs at index " + std::to_string(i)));
        break;
      }
    }
  }
  auto fn = [&](std::size_t r) {
    const FieldConfig cfg = config_for(2, replica_seed(base_seed, r), 1.5, r);
    return run_epidemic(cfg, Box::centered(2, 6), kInfinity).infection_times();
  };
  ++out.cases;
  if (map_replicas(seeds, fn) != map_replicas_serial(seeds, fn)) out.fail("replica map differs from serial reference");
  return out;
}

}  // namespace epishape::checks
