#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <tuple>

namespace epishape::oracle {

namespace {

bool bond_open(const FieldConfig& cfg, const Site& x, int dir) { return is_open(cfg, OrientedBond{x, dir}); }

/// Sites reachable from `from` in the box by open paths whose sites lie in `ok`.
SiteSet reach(const FieldConfig& cfg, const Box& box, const Site& from, bool reversed,
              const std::function<bool(const Site&)>& ok) {
  SiteSet seen{from};
  std::vector<Site> stack{from};
  const int dirs = 2 * from.d;
  while (!stack.empty()) {
    const Site u = stack.back();
    stack.pop_back();
    for (int dir = 0; dir < dirs; ++dir) {
      const Site v = step(u, dir);
      if (!box.contains(v) || !ok(v) || seen.count(v)) continue;
      const bool open = reversed ? bond_open(cfg, v, reverse_direction(dir)) : bond_open(cfg, u, dir);
      if (!open) continue;
      seen.insert(v);
      stack.push_back(v);
    }
  }
  return seen;
}

}  // namespace

std::map<Site, double> event_epidemic(const FieldConfig& cfg, const Box& box, double horizon) {
  enum Kind { infect = 0, germ = 1, recover = 2 };
  using Event = std::tuple<double, int, Site>;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
  std::map<Site, double> infected;
  std::set<Site> recovered;
  const Site o = Site::origin(cfg.d);
  queue.emplace(0.0, infect, o);
  while (!queue.empty()) {
    const auto [t, kind, x] = queue.top();
    queue.pop();
    if (t > horizon) break;
    if (kind == recover) {
      recovered.insert(x);
      continue;
    }
    if (kind == germ) {
      // a transmission germ arriving at a susceptible site infects it
      if (!infected.count(x)) queue.emplace(t, infect, x);
      continue;
    }
    if (infected.count(x)) continue;
    infected.emplace(x, t);
    const double period = recovery_time(cfg, x);
    queue.emplace(t + period, recover, x);
    for (int dir = 0; dir < 2 * cfg.d; ++dir) {
      const Site y = step(x, dir);
      if (!box.contains(y)) continue;  // absorbing wall
      const double e = edge_clock(cfg, OrientedBond{x, dir});
      if (e < period) queue.emplace(t + e, germ, y);
    }
  }
  return infected;
}

std::map<Site, std::int64_t> hop_layers(const FieldConfig& cfg, const Box& box, const Site& x,
                                        const SiteSet& allowed, bool reversed) {
  // Forward: paths x = x_0, ..., x_n with x_0..x_{n-1} allowed, so only allowed
  // sites are extended. Reversed: paths y = x_0, ..., x_n = x, grown backwards
  // from x; x may lie anywhere, every earlier site must be allowed.
  std::map<Site, std::int64_t> hops{{x, 0}};
  std::vector<Site> layer{x};
  for (std::int64_t k = 1; !layer.empty(); ++k) {
    std::vector<Site> next;
    for (const Site& u : layer) {
      const bool extendable = reversed ? (u == x || allowed.count(u)) : allowed.count(u) > 0;
      if (!extendable) continue;
      for (int dir = 0; dir < 2 * x.d; ++dir) {
        const Site v = step(u, dir);
        if (!box.contains(v) || hops.count(v)) continue;
        if (reversed && !allowed.count(v)) continue;
        const bool open = reversed ? bond_open(cfg, v, reverse_direction(dir)) : bond_open(cfg, u, dir);
        if (!open) continue;
        hops.emplace(v, k);
        next.push_back(v);
      }
    }
    layer = std::move(next);
  }
  return hops;
}

std::map<Site, double> relaxed_passage_times(const FieldConfig& cfg, const Box& box, const Site& x) {
  const auto sites = box_sites(box);
  std::map<Site, double> dist;
  for (const auto& s : sites) dist[s] = std::numeric_limits<double>::infinity();
  dist[x] = 0.0;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& u : sites) {
      const double du = dist[u];
      if (std::isinf(du)) continue;
      for (int dir = 0; dir < 2 * x.d; ++dir) {
        const Site v = step(u, dir);
        if (!box.contains(v) || !bond_open(cfg, u, dir)) continue;
        const double cand = du + edge_clock(cfg, OrientedBond{u, dir});
        if (cand < dist[v]) {
          dist[v] = cand;
          changed = true;
        }
      }
    }
  }
  return dist;
}

SiteSet tilde_c_by_site(const FieldConfig& cfg, const Box& box) {
  const auto sites = box_sites(box);
  const int dirs = 2 * box.dim();
  auto exits = [&](const Site& s) {
    for (int dir = 0; dir < dirs; ++dir) {
      if (!box.contains(step(s, dir)) && bond_open(cfg, s, dir)) return true;
    }
    return false;
  };
  auto entered = [&](const Site& s) {
    for (int dir = 0; dir < dirs; ++dir) {
      const Site w = step(s, dir);
      if (!box.contains(w) && bond_open(cfg, w, reverse_direction(dir))) return true;
    }
    return false;
  };
  auto everywhere = [](const Site&) { return true; };
  SiteSet members;
  for (const auto& x : sites) {
    const SiteSet fwd = reach(cfg, box, x, false, everywhere);
    if (std::none_of(fwd.begin(), fwd.end(), exits)) continue;
    const SiteSet bwd = reach(cfg, box, x, true, everywhere);
    if (std::none_of(bwd.begin(), bwd.end(), entered)) continue;
    members.insert(x);
  }
  return members;
}

SiteSet roots_by_paths(const FieldConfig& cfg, const Box& box, const Site& x, const SiteSet& tc, bool reversed) {
  if (tc.count(x)) return {};
  return reach(cfg, box, x, reversed, [&](const Site& s) { return !tc.count(s); });
}

std::optional<std::int64_t> kappa_by_definition(const FieldConfig& cfg, const Box& box, const Site& x,
                                                const SiteSet& tc, std::int64_t c_prime) {
  const SiteSet ro = roots_by_paths(cfg, box, x, tc, false);
  const SiteSet ri = roots_by_paths(cfg, box, x, tc, true);
  const std::int64_t lmax = (box.radius - norm_inf(x - box.center)) / c_prime;
  for (std::int64_t l = 1; l <= lmax; ++l) {
    const bool root_at_l = std::any_of(ro.begin(), ro.end(), [&](const Site& y) { return norm_inf(y - x) == l; }) ||
                           std::any_of(ri.begin(), ri.end(), [&](const Site& y) { return norm_inf(y - x) == l; });
    if (root_at_l) continue;
    std::vector<Site> v;
    for (const auto& s : box_sites(Box(x, l))) {
      if (tc.count(s)) v.push_back(s);
    }
    if (v.empty()) continue;
    const Box outer(x, c_prime * l);
    bool connected = true;
    for (const auto& a : v) {
      const SiteSet from_a = reach(cfg, box, a, false, [&](const Site& s) { return outer.contains(s); });
      for (const auto& b : v) connected = connected && from_a.count(b);
      if (!connected) break;
    }
    if (connected) return l;
  }
  return std::nullopt;
}

}  // namespace epishape::oracle
