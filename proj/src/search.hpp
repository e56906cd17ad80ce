#pragma once

// Index-level breadth-first searches shared by the cluster and epidemic code.

#include <cstdint>
#include <span>
#include <vector>

#include "epishape/box_graph.hpp"
#include "epishape/cluster.hpp"

namespace epishape::detail {

/// Generation-stamped per-site integer labels; reset is O(1).
class Marks {
 public:
  void reset(std::size_t n) {
    if (stamp_.size() < n) {
      stamp_.assign(n, 0);
      value_.resize(n);
      gen_ = 0;
    }
    if (++gen_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0u);
      gen_ = 1;
    }
  }
  bool seen(std::size_t i) const { return stamp_[i] == gen_; }
  void set(std::size_t i, std::int32_t v) {
    stamp_[i] = gen_;
    value_[i] = v;
  }
  std::int32_t get(std::size_t i) const { return seen(i) ? value_[i] : -1; }

 private:
  std::vector<std::uint32_t> stamp_;
  std::vector<std::int32_t> value_;
  std::uint32_t gen_ = 0;
};

/// Thread-local scratch; distinct slots may be live at the same time.
Marks& scratch(int slot);

struct BfsOutcome {
  std::vector<std::size_t> order;  // visit order, sources first
  bool touched = false;            // an open bond leads to a disallowed site or off the box
};

/// Breadth-first search over open bonds (reversed for Direction::in). Sources
/// are labelled 0 regardless of `allowed`; every other visited site satisfies
/// allowed(idx). Labels are hop counts stored in `marks`.
template <class Allowed>
BfsOutcome bfs(const BoxGraph& g, std::span<const std::size_t> sources, Direction direction, Allowed&& allowed,
               std::int64_t budget, Marks& marks) {
  BfsOutcome out;
  marks.reset(g.size());
  for (std::size_t s : sources) {
    if (!marks.seen(s)) {
      marks.set(s, 0);
      out.order.push_back(s);
    }
  }
  const int nd = g.directions();
  for (std::size_t head = 0; head < out.order.size(); ++head) {
    const std::size_t u = out.order[head];
    const std::int32_t hu = marks.get(u);
    if (budget >= 0 && hu >= budget) continue;
    for (int dir = 0; dir < nd; ++dir) {
      const bool open = direction == Direction::out ? g.open(u, dir) : g.open_into(u, dir);
      if (!open) continue;
      const std::size_t v = g.neighbor(u, dir);
      if (v == BoxGraph::npos || !allowed(v)) {
        out.touched = true;
        continue;
      }
      if (!marks.seen(v)) {
        marks.set(v, hu + 1);
        out.order.push_back(v);
      }
    }
  }
  return out;
}

}  // namespace epishape::detail
