#include "epishape/cluster.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "search.hpp"

namespace epishape {

namespace detail {

Marks& scratch(int slot) {
  thread_local std::array<Marks, 4> pool;
  return pool.at(static_cast<std::size_t>(slot));
}

}  // namespace detail

namespace {

std::vector<std::size_t> box_indices(const BoxGraph& g, const Box& b) {
  std::vector<std::size_t> out;
  for (const Site& y : box_sites(b)) out.push_back(g.index(y));
  return out;
}

bool index_in_box(const BoxGraph& g, std::size_t idx, const Box& b) {
  for (int axis = 0; axis < g.dim(); ++axis) {
    const std::int64_t v = g.coord(idx, axis) - b.center[axis];
    if (v > b.radius || v < -b.radius) return false;
  }
  return true;
}

}  // namespace

Region Region::box(const Box& b) {
  Region r(Kind::box);
  r.box_ = b;
  return r;
}

Region Region::slab(const Slab& s, const Box& clip) {
  if (s.axis < 0 || s.axis >= clip.dim()) throw std::invalid_argument("slab axis out of range");
  if (s.thickness < 1) throw std::invalid_argument("slab thickness must be positive");
  Region r(Kind::slab);
  r.slab_ = s;
  r.box_ = clip;
  return r;
}

Region Region::complement_of(std::vector<Site> sites) {
  Region r(Kind::complement);
  r.excluded_ = std::make_shared<const std::unordered_set<Site, SiteHash>>(sites.begin(), sites.end());
  return r;
}

Region Region::complement_of(const TildeC& tc) {
  Region r(Kind::complement);
  r.excluded_mask_ = std::make_shared<const std::vector<char>>(tc.mask());
  r.mask_box_ = tc.box();
  return r;
}

bool Region::contains(const Site& y) const {
  switch (kind_) {
    case Kind::all: return true;
    case Kind::box: return box_.contains(y);
    case Kind::slab: return box_.contains(y) && slab_.contains(y);
    case Kind::complement:
      if (excluded_) return !excluded_->contains(y);
      if (!mask_box_.contains(y)) return true;
      {
        // same indexing as BoxGraph over mask_box_
        std::size_t idx = 0;
        const auto side = static_cast<std::size_t>(2 * mask_box_.radius + 1);
        for (int axis = 0; axis < y.d; ++axis) {
          idx = idx * side + static_cast<std::size_t>(y[axis] - mask_box_.center[axis] + mask_box_.radius);
        }
        return (*excluded_mask_)[idx] == 0;
      }
  }
  return false;
}

bool Region::contains(const BoxGraph& g, std::size_t idx) const {
  switch (kind_) {
    case Kind::all: return true;
    case Kind::box: return index_in_box(g, idx, box_);
    case Kind::slab: {
      const std::int64_t h = g.coord(idx, slab_.axis);
      return h >= slab_.base && h <= slab_.base + slab_.thickness && index_in_box(g, idx, box_);
    }
    case Kind::complement:
      if (excluded_mask_ && mask_box_ == g.box()) return (*excluded_mask_)[idx] == 0;
      return contains(g.site(idx));
  }
  return false;
}

bool ClusterReport::contains(const Site& y) const { return std::binary_search(sites.begin(), sites.end(), y); }

std::optional<std::int64_t> ClusterReport::hop(const Site& y) const {
  const auto it = std::lower_bound(sites.begin(), sites.end(), y);
  if (it == sites.end() || *it != y) return std::nullopt;
  return hops[static_cast<std::size_t>(it - sites.begin())];
}

ClusterReport cluster(const BoxGraph& g, const Site& x, Direction direction, const Region& region,
                      std::int64_t hop_budget) {
  ClusterReport report;
  report.root = x;
  report.direction = direction;
  const std::size_t root = g.index(x);
  const bool root_inside = region.contains(g, root);
  if (direction == Direction::out && !root_inside) return report;

  auto& marks = detail::scratch(0);
  const std::size_t src[] = {root};
  auto allowed = [&](std::size_t v) { return region.contains(g, v); };
  const auto res = detail::bfs(g, src, direction, allowed, hop_budget, marks);
  report.touched_boundary = res.touched;

  std::vector<std::size_t> visited = res.order;
  if (!root_inside) visited.erase(visited.begin());
  std::sort(visited.begin(), visited.end());
  report.sites.reserve(visited.size());
  report.hops.reserve(visited.size());
  for (std::size_t v : visited) {
    report.sites.push_back(g.site(v));
    report.hops.push_back(marks.get(v));
  }
  return report;
}

std::optional<std::int64_t> chemical_distance(const BoxGraph& g, const Site& x, const Site& y,
                                              const Region& region) {
  if (x == y) return 0;
  const std::size_t xi = g.index(x);
  const std::size_t yi = g.index(y);
  if (!region.contains(g, xi)) return std::nullopt;
  auto& marks = detail::scratch(0);
  const std::size_t src[] = {xi};
  auto allowed = [&](std::size_t v) { return region.contains(g, v); };
  detail::bfs(g, src, Direction::out, allowed, -1, marks);
  if (marks.seen(yi)) return marks.get(yi);
  // y outside the region may still be the endpoint of a path
  std::optional<std::int64_t> best;
  for (int dir = 0; dir < g.directions(); ++dir) {
    const std::size_t u = g.neighbor(yi, dir);
    if (u == BoxGraph::npos || !marks.seen(u) || !g.open(u, reverse_direction(dir))) continue;
    const std::int64_t h = marks.get(u) + 1;
    if (!best || h < *best) best = h;
  }
  return best;
}

TildeC::TildeC(Box universe, std::vector<char> members) : box_(universe), members_(std::move(members)) {}

bool TildeC::contains(const Site& x) const {
  if (!box_.contains(x)) return false;
  std::size_t idx = 0;
  const auto side = static_cast<std::size_t>(2 * box_.radius + 1);
  for (int axis = 0; axis < x.d; ++axis) {
    idx = idx * side + static_cast<std::size_t>(x[axis] - box_.center[axis] + box_.radius);
  }
  return members_[idx] != 0;
}

std::size_t TildeC::count() const {
  return static_cast<std::size_t>(std::count(members_.begin(), members_.end(), char{1}));
}

std::vector<Site> TildeC::sites() const {
  std::vector<Site> out;
  const auto all = box_sites(box_);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (members_[i]) out.push_back(all[i]);
  }
  return out;
}

TildeC tilde_c(const BoxGraph& g) {
  std::vector<std::size_t> exits;
  std::vector<std::size_t> entries;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.on_boundary(i)) continue;
    bool exit = false;
    bool entry = false;
    for (int dir = 0; dir < g.directions(); ++dir) {
      if (g.neighbor(i, dir) != BoxGraph::npos) continue;
      exit = exit || g.open(i, dir);
      entry = entry || g.open_into(i, dir);
    }
    if (exit) exits.push_back(i);
    if (entry) entries.push_back(i);
  }
  auto everywhere = [](std::size_t) { return true; };
  std::vector<char> members(g.size(), 0);
  auto& marks = detail::scratch(0);
  // sites that can leave the box: reversed search from the exit sites
  const auto leave = detail::bfs(g, exits, Direction::in, everywhere, -1, marks);
  for (std::size_t v : leave.order) members[v] = 1;
  const auto enter = detail::bfs(g, entries, Direction::out, everywhere, -1, marks);
  std::vector<char> both(g.size(), 0);
  for (std::size_t v : enter.order) both[v] = members[v];
  return TildeC(g.box(), std::move(both));
}

RootPair roots(const BoxGraph& g, const Site& x, const TildeC& tc) {
  if (!(tc.box() == g.box())) throw std::invalid_argument("C~ was computed on a different universe");
  RootPair rp;
  rp.x = x;
  const std::size_t xi = g.index(x);
  if (tc.contains(xi)) return rp;
  auto outside = [&](std::size_t v) { return !tc.contains(v); };
  const std::size_t src[] = {xi};
  for (Direction dir : {Direction::out, Direction::in}) {
    auto& marks = detail::scratch(0);
    auto res = detail::bfs(g, src, dir, outside, -1, marks);
    std::sort(res.order.begin(), res.order.end());
    auto& dest = dir == Direction::out ? rp.out : rp.in;
    for (std::size_t v : res.order) {
      if (g.on_boundary(v)) rp.truncated = true;
      dest.push_back(g.site(v));
    }
  }
  return rp;
}

std::int64_t kappa_limit(const BoxGraph& g, const Site& x, std::int64_t c_prime) {
  return (g.box().radius - norm_inf(x - g.box().center)) / c_prime;
}

namespace {

/// Every pair of `targets` is joined by an open path inside `region`.
bool strongly_connected_within(const BoxGraph& g, const std::vector<std::size_t>& targets, const Box& region) {
  auto inside = [&](std::size_t v) { return index_in_box(g, v, region); };
  const std::size_t src[] = {targets.front()};
  for (Direction dir : {Direction::out, Direction::in}) {
    auto& marks = detail::scratch(1);
    detail::bfs(g, src, dir, inside, -1, marks);
    for (std::size_t t : targets) {
      if (!marks.seen(t)) return false;
    }
  }
  return true;
}

/// Bonds of the lexicographically first minimal-hop open path from each y in
/// `ends` to z inside `region`.
void append_geodesics_to(const BoxGraph& g, std::size_t z, const std::vector<std::size_t>& ends,
                         const Box& region, std::vector<std::pair<std::size_t, int>>& bonds) {
  auto inside = [&](std::size_t v) { return index_in_box(g, v, region); };
  auto& to_z = detail::scratch(2);
  const std::size_t src[] = {z};
  detail::bfs(g, src, Direction::in, inside, -1, to_z);
  for (std::size_t y : ends) {
    if (y == z) continue;
    if (!to_z.seen(y)) throw std::logic_error("neighbourhood pair is not connected");
    std::size_t u = y;
    while (u != z) {
      const std::int32_t want = to_z.get(u) - 1;
      std::size_t best = BoxGraph::npos;
      int best_dir = -1;
      for (int dir = 0; dir < g.directions(); ++dir) {
        if (!g.open(u, dir)) continue;
        const std::size_t v = g.neighbor(u, dir);
        if (v == BoxGraph::npos || to_z.get(v) != want) continue;
        if (v < best) {
          best = v;
          best_dir = dir;
        }
      }
      bonds.emplace_back(u, best_dir);
      u = best;
    }
  }
}

}  // namespace

Neighborhood kappa(const BoxGraph& g, const Site& x, const TildeC& tc, std::int64_t c_prime, bool bonds) {
  if (c_prime < 2) throw std::invalid_argument("c_prime must be >= 2");
  const RootPair rp = roots(g, x, tc);
  if (rp.truncated) {
    throw TruncationError("roots of " + to_string(x) + " reach the box boundary; increase box_radius");
  }
  const std::int64_t lmax = kappa_limit(g, x, c_prime);
  std::vector<char> root_at(static_cast<std::size_t>(std::max<std::int64_t>(lmax, 0) + 1), 0);
  for (const auto* set : {&rp.out, &rp.in}) {
    for (const Site& y : *set) {
      const std::int64_t r = norm_inf(y - x);
      if (r <= lmax) root_at[static_cast<std::size_t>(r)] = 1;
    }
  }

  for (std::int64_t l = 1; l <= lmax; ++l) {
    if (root_at[static_cast<std::size_t>(l)]) continue;  // (i)
    std::vector<std::size_t> v;
    for (std::size_t idx : box_indices(g, Box(x, l))) {
      if (tc.contains(idx)) v.push_back(idx);
    }
    if (v.empty()) continue;  // (ii)
    const Box outer(x, c_prime * l);
    if (!strongly_connected_within(g, v, outer)) continue;  // (iii)

    Neighborhood nb;
    nb.x = x;
    nb.kappa = l;
    nb.c_prime = c_prime;
    for (std::size_t idx : v) nb.V.push_back(g.site(idx));
    if (!bonds) return nb;
    nb.has_bonds = true;

    std::vector<std::pair<std::size_t, int>> bonds;
    const Box inner(x, l);
    for (std::size_t idx : box_indices(g, inner)) {
      for (int dir = 0; dir < g.directions(); ++dir) {
        const std::size_t w = g.neighbor(idx, dir);
        if (w != BoxGraph::npos && g.open(idx, dir) && index_in_box(g, w, inner)) bonds.emplace_back(idx, dir);
      }
    }
    if (v.size() > 1) {
      for (std::size_t z : v) append_geodesics_to(g, z, v, outer, bonds);
    }
    std::sort(bonds.begin(), bonds.end());
    bonds.erase(std::unique(bonds.begin(), bonds.end()), bonds.end());
    nb.gamma_bar.reserve(bonds.size());
    for (const auto& [idx, dir] : bonds) nb.gamma_bar.emplace_back(g.site(idx), dir);
    return nb;
  }
  throw TruncationError("no admissible kappa for " + to_string(x) + " with c_prime=" + std::to_string(c_prime) +
                        " inside box radius " + std::to_string(g.box().radius) + "; increase box_radius");
}

double u_weight(const BoxGraph& g, const Neighborhood& nb) {
  // every bond of the neighbourhood is open, and its edge clock is used as its passage time
  if (!nb.has_bonds) throw std::logic_error("u_weight needs the bond neighbourhood");
  double total = 0.0;
  for (const OrientedBond& b : nb.gamma_bar) total += g.clock(g.index(b.from), b.dir);
  return total;
}

}  // namespace epishape
