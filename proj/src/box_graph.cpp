#include "epishape/box_graph.hpp"

#include <algorithm>

namespace epishape {

BoxGraph::BoxGraph(const FieldConfig& cfg, const Box& universe) : cfg_(cfg), box_(universe) {
  cfg_.validate();
  if (cfg_.d != box_.dim()) throw ConfigError("field and box dimensions differ");
  side_ = static_cast<std::size_t>(2 * box_.radius + 1);
  const int d = box_.dim();
  // axis 0 most significant so that index order is lexicographic
  std::size_t s = 1;
  for (int axis = d - 1; axis >= 0; --axis) {
    stride_[axis] = s;
    s *= side_;
  }
  size_ = s;
  recovery_.assign(size_, 0.0);
  clock_.assign(size_ * static_cast<std::size_t>(directions()), 0.0);
  mask_.assign(size_, kUnfilled);
}

std::size_t BoxGraph::index(const Site& x) const {
  if (!box_.contains(x)) throw std::out_of_range("site " + to_string(x) + " is outside the universe box");
  std::size_t idx = 0;
  for (int axis = 0; axis < dim(); ++axis) {
    idx += static_cast<std::size_t>(x[axis] - box_.center[axis] + box_.radius) * stride_[axis];
  }
  return idx;
}

Site BoxGraph::site(std::size_t idx) const {
  Site x(dim());
  for (int axis = 0; axis < dim(); ++axis) x[axis] = coord(idx, axis);
  return x;
}

std::int64_t BoxGraph::radius_of(std::size_t idx) const {
  std::int64_t m = 0;
  for (int axis = 0; axis < dim(); ++axis) {
    const std::int64_t v = coord(idx, axis) - box_.center[axis];
    m = std::max(m, v < 0 ? -v : v);
  }
  return m;
}

bool BoxGraph::open_into(std::size_t idx, int dir) const {
  const std::size_t nb = neighbor(idx, dir);
  if (nb != npos) return open(nb, reverse_direction(dir));
  const Site from = step(site(idx), dir);
  return is_open(cfg_, OrientedBond(from, reverse_direction(dir)));
}

void BoxGraph::fill_site(std::size_t idx) const {
  const Site x = site(idx);
  const double t = recovery_time(cfg_, x);
  const int nd = directions();
  std::uint8_t mask = 0;
  for (int dir = 0; dir < nd; ++dir) {
    const double e = edge_clock(cfg_, OrientedBond(x, dir));
    clock_[idx * static_cast<std::size_t>(nd) + static_cast<std::size_t>(dir)] = e;
    if (e < t) mask |= static_cast<std::uint8_t>(1u << dir);
  }
  recovery_[idx] = t;
  mask_[idx] = mask;
}

void BoxGraph::materialize() {
  const auto n = static_cast<std::int64_t>(size_);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) fill(static_cast<std::size_t>(i));
}

void BoxGraph::materialize_serial() {
  for (std::size_t i = 0; i < size_; ++i) fill(i);
}

}  // namespace epishape
