#include "epishape/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_set>

namespace epishape {

void check_dimension(int d) {
  if (d < 2 || d > kMaxDim) {
    throw std::invalid_argument("dimension must be 2, 3 or 4 (got " + std::to_string(d) + ")");
  }
}

Site::Site(int dim) : d(dim) { check_dimension(dim); }

Site::Site(std::initializer_list<std::int64_t> coords) : d(static_cast<int>(coords.size())) {
  check_dimension(d);
  std::copy(coords.begin(), coords.end(), c.begin());
}

Site Site::unit(int dim, int axis, int sign) {
  Site s(dim);
  s[axis] = sign;
  return s;
}

Site Site::operator+(const Site& o) const {
  Site r = *this;
  for (int i = 0; i < d; ++i) r[i] += o[i];
  return r;
}

Site Site::operator-(const Site& o) const {
  Site r = *this;
  for (int i = 0; i < d; ++i) r[i] -= o[i];
  return r;
}

Site Site::scaled(std::int64_t k) const {
  Site r = *this;
  for (int i = 0; i < d; ++i) r[i] *= k;
  return r;
}

std::int64_t norm1(const Site& x) {
  std::int64_t s = 0;
  for (int i = 0; i < x.d; ++i) s += x[i] < 0 ? -x[i] : x[i];
  return s;
}

std::int64_t norm_inf(const Site& x) {
  std::int64_t m = 0;
  for (int i = 0; i < x.d; ++i) m = std::max(m, x[i] < 0 ? -x[i] : x[i]);
  return m;
}

std::string to_string(const Site& x) {
  std::string s = "(";
  for (int i = 0; i < x.d; ++i) {
    if (i) s += ',';
    s += std::to_string(x[i]);
  }
  return s + ")";
}

std::size_t SiteHash::operator()(const Site& x) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(x.d);
  for (int i = 0; i < x.d; ++i) {
    h ^= static_cast<std::uint64_t>(x[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

Site step(const Site& x, int dir) {
  Site y = x;
  y[direction_axis(dir)] += direction_sign(dir);
  return y;
}

OrientedBond OrientedBond::between(const Site& from, const Site& to) {
  if (from.d != to.d) throw std::invalid_argument("bond endpoints differ in dimension");
  const Site diff = to - from;
  if (norm1(diff) != 1) {
    throw std::invalid_argument("bond endpoints " + to_string(from) + " and " + to_string(to) +
                                " are not nearest neighbours");
  }
  for (int axis = 0; axis < from.d; ++axis) {
    if (diff[axis] != 0) return {from, 2 * axis + (diff[axis] > 0 ? 1 : 0)};
  }
  throw std::logic_error("unreachable");
}

Box::Box(const Site& c, std::int64_t r) : center(c), radius(r) {
  if (r < 0) throw std::invalid_argument("box radius must be non-negative");
  if (norm_inf(c) + r > kMaxCoord) throw std::invalid_argument("box exceeds coordinate limit 2^20");
}

bool Box::contains(const Site& y) const { return norm_inf(y - center) <= radius; }

bool Box::on_boundary(const Site& y) const { return norm_inf(y - center) == radius; }

std::size_t Box::volume() const {
  std::size_t v = 1;
  for (int i = 0; i < dim(); ++i) v *= static_cast<std::size_t>(2 * radius + 1);
  return v;
}

bool Slab::contains(const Site& y) const {
  return y[axis] >= base && y[axis] <= base + thickness;
}

bool Cone::contains(const Site& z) const {
  if (static_cast<int>(direction.size()) != z.d) {
    throw std::invalid_argument("cone direction dimension mismatch");
  }
  if (amplitude <= 0.0) throw std::invalid_argument("cone amplitude must be positive");
  // Each coordinate gives z_i - a t <= x_i t <= z_i + a t, i.e. linear constraints on t >= 0.
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  auto at_least = [&](double coef, double rhs) {  // coef * t >= rhs
    if (coef > 0) lo = std::max(lo, rhs / coef);
    else if (coef < 0) hi = std::min(hi, rhs / coef);
    else if (rhs > 0) hi = -1.0;
  };
  for (int i = 0; i < z.d; ++i) {
    const double x = direction[static_cast<std::size_t>(i)];
    const double zi = static_cast<double>(z[i]);
    at_least(x + amplitude, zi);
    at_least(-(x - amplitude), -zi);
  }
  return lo <= hi;
}

std::vector<Site> neighbors(const Site& x) {
  std::vector<Site> out;
  out.reserve(static_cast<std::size_t>(direction_count(x.d)));
  for (int dir = 0; dir < direction_count(x.d); ++dir) out.push_back(step(x, dir));
  return out;
}

std::vector<Site> box_sites(const Box& b) {
  const int d = b.dim();
  std::vector<Site> out;
  out.reserve(b.volume());
  Site y = b.center;
  for (int i = 0; i < d; ++i) y[i] -= b.radius;
  // odometer over coordinates, last axis fastest, so output is lexicographic
  while (true) {
    out.push_back(y);
    int i = d - 1;
    while (i >= 0 && y[i] == b.center[i] + b.radius) {
      y[i] = b.center[i] - b.radius;
      --i;
    }
    if (i < 0) break;
    ++y[i];
  }
  return out;
}

std::vector<Site> box_boundary(const Box& b) {
  if (b.radius < 1) throw std::invalid_argument("box boundary requires radius >= 1");
  std::vector<Site> out;
  for (const Site& y : box_sites(b)) {
    if (b.on_boundary(y)) out.push_back(y);
  }
  return out;
}

std::vector<Site> exterior_vertex_boundary(std::span<const Site> a) {
  std::unordered_set<Site, SiteHash> members(a.begin(), a.end());
  std::set<Site> out;
  for (const Site& y : a) {
    for (const Site& z : neighbors(y)) {
      if (!members.contains(z)) out.insert(z);
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace epishape
