#include "epishape/epidemic.hpp"

#include <algorithm>
#include <functional>
#include <iomanip>
#include <ostream>
#include <queue>
#include <utility>

#include "epishape/io.hpp"

namespace epishape {

namespace {

using Entry = std::pair<double, std::size_t>;
// (time, index) min-heap: ties go to the lexicographically smaller site
using MinHeap = std::priority_queue<Entry, std::vector<Entry>, std::greater<>>;

template <class Expandable, class Stop>
std::vector<double> dijkstra(const BoxGraph& g, std::span<const std::size_t> sources, Expandable&& expandable,
                             Stop&& stop) {
  std::vector<double> dist(g.size(), kInfinity);
  MinHeap heap;
  for (std::size_t s : sources) {
    dist[s] = 0.0;
    heap.emplace(0.0, s);
  }
  const int nd = g.directions();
  while (!heap.empty()) {
    const auto [t, u] = heap.top();
    heap.pop();
    if (t > dist[u]) continue;
    if (stop(u, t)) break;
    if (!expandable(u)) continue;
    const std::uint8_t mask = g.out_mask(u);
    for (int dir = 0; dir < nd; ++dir) {
      if (!((mask >> dir) & 1u)) continue;
      const std::size_t v = g.neighbor(u, dir);
      if (v == BoxGraph::npos) continue;
      const double tv = t + g.clock(u, dir);
      if (tv < dist[v]) {
        dist[v] = tv;
        heap.emplace(tv, v);
      }
    }
  }
  return dist;
}

}  // namespace

EpidemicTrajectory::EpidemicTrajectory(Box box, double horizon, std::vector<double> infection,
                                       std::vector<double> recovery, bool touched_boundary)
    : box_(box),
      horizon_(horizon),
      infection_(std::move(infection)),
      recovery_(std::move(recovery)),
      touched_boundary_(touched_boundary) {}

std::size_t EpidemicTrajectory::index(const Site& x) const {
  if (!box_.contains(x)) throw std::out_of_range("site outside the epidemic box");
  std::size_t idx = 0;
  const auto side = static_cast<std::size_t>(2 * box_.radius + 1);
  for (int axis = 0; axis < x.d; ++axis) {
    idx = idx * side + static_cast<std::size_t>(x[axis] - box_.center[axis] + box_.radius);
  }
  return idx;
}

double EpidemicTrajectory::infection_time(const Site& x) const {
  return box_.contains(x) ? infection_[index(x)] : kInfinity;
}

double EpidemicTrajectory::recovery_time(const Site& x) const {
  return box_.contains(x) ? recovery_[index(x)] : kInfinity;
}

StateSnapshot EpidemicTrajectory::snapshot(double t) const {
  StateSnapshot snap;
  snap.t = t;
  const auto all = box_sites(box_);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!(infection_[i] <= t)) continue;
    (recovery_[i] <= t ? snap.xi : snap.zeta).push_back(all[i]);
  }
  return snap;
}

std::vector<Site> EpidemicTrajectory::infected_by(double t) const {
  std::vector<Site> out;
  const auto all = box_sites(box_);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (infection_[i] <= t) out.push_back(all[i]);
  }
  return out;
}

std::size_t EpidemicTrajectory::ever_infected() const {
  return static_cast<std::size_t>(
      std::count_if(infection_.begin(), infection_.end(), [](double t) { return t < kInfinity; }));
}

void EpidemicTrajectory::write_csv(std::ostream& os) const {
  const int d = box_.dim();
  for (int i = 0; i < d; ++i) os << 'x' << (i + 1) << ',';
  os << "infection_time,recovery_time\n";
  const auto all = box_sites(box_);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!(infection_[i] < kInfinity)) continue;
    for (int a = 0; a < d; ++a) os << all[i][a] << ',';
    os << format_time(infection_[i]) << ',' << format_time(recovery_[i]) << '\n';
  }
}

std::vector<double> passage_times_from(const BoxGraph& g, std::span<const std::size_t> sources,
                                       const Region& region) {
  auto never = [](std::size_t, double) { return false; };
  if (region.kind() == Region::Kind::all) {
    return dijkstra(g, sources, [](std::size_t) { return true; }, never);
  }
  std::vector<char> is_source(g.size(), 0);
  for (std::size_t s : sources) is_source[s] = 1;
  auto expandable = [&](std::size_t u) { return is_source[u] || region.contains(g, u); };
  return dijkstra(g, sources, expandable, never);
}

double passage_time(const BoxGraph& g, const Site& x, const Site& y, const Region& region) {
  if (x == y) return 0.0;
  const std::size_t xi = g.index(x);
  const std::size_t yi = g.index(y);
  if (!region.contains(g, xi)) return kInfinity;
  const std::size_t src[] = {xi};
  auto expandable = [&](std::size_t u) { return region.contains(g, u); };
  const auto dist = dijkstra(g, src, expandable, [yi](std::size_t u, double) { return u == yi; });
  return dist[yi];
}

EpidemicTrajectory run_epidemic(const BoxGraph& g, double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  const Site o = Site::origin(g.dim());
  if (!g.box().contains(o) || g.box().on_boundary(o)) {
    throw std::invalid_argument("the origin must lie in the interior of the epidemic box");
  }
  const std::size_t src[] = {g.index(o)};
  auto infection = dijkstra(
      g, src, [](std::size_t) { return true; }, [horizon](std::size_t, double t) { return t > horizon; });
  std::vector<double> recovery(g.size(), kInfinity);
  bool touched = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (infection[i] > horizon) {
      infection[i] = kInfinity;
      continue;
    }
    recovery[i] = infection[i] + g.recovery(i);
    if (g.on_boundary(i)) touched = true;
  }
  return EpidemicTrajectory(g.box(), horizon, std::move(infection), std::move(recovery), touched);
}

EpidemicTrajectory run_epidemic(const FieldConfig& cfg, const Box& box, double horizon) {
  BoxGraph g(cfg, box);
  return run_epidemic(g, horizon);
}

double tau_hat(const BoxGraph& g, const Neighborhood& nx, const Neighborhood& ny) {
  std::vector<std::size_t> src;
  for (const Site& s : nx.V) src.push_back(g.index(s));
  std::vector<char> target(g.size(), 0);
  for (const Site& s : ny.V) target[g.index(s)] = 1;
  for (std::size_t s : src) {
    if (target[s]) return 0.0;
  }
  double found = kInfinity;
  dijkstra(
      g, src, [](std::size_t) { return true; },
      [&](std::size_t u, double t) {
        if (!target[u]) return false;
        found = t;
        return true;
      });
  return found;
}

double tau_hat(const BoxGraph& g, const Site& x, const Site& y, const TildeC& tc, std::int64_t c_prime) {
  const Neighborhood nx = kappa(g, x, tc, c_prime, false);
  const Neighborhood ny = kappa(g, y, tc, c_prime, false);
  return tau_hat(g, nx, ny);
}

}  // namespace epishape
