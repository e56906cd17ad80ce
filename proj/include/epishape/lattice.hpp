#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace epishape {

inline constexpr int kMaxDim = 4;
inline constexpr std::int64_t kMaxCoord = std::int64_t{1} << 20;

/// A point of Z^d, d in {2,3,4}. Unused trailing coordinates are kept at zero
/// so the defaulted ordering is lexicographic in the active coordinates.
struct Site {
  std::array<std::int64_t, kMaxDim> c{};
  int d = 0;

  Site() = default;
  explicit Site(int dim);
  Site(std::initializer_list<std::int64_t> coords);

  static Site origin(int dim) { return Site(dim); }
  /// sign * e_axis
  static Site unit(int dim, int axis, int sign = +1);

  std::int64_t operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  std::int64_t& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

  friend auto operator<=>(const Site&, const Site&) = default;
  friend bool operator==(const Site&, const Site&) = default;

  Site operator+(const Site& o) const;
  Site operator-(const Site& o) const;
  Site scaled(std::int64_t k) const;
};

std::int64_t norm1(const Site& x);
std::int64_t norm_inf(const Site& x);
std::string to_string(const Site& x);

struct SiteHash {
  std::size_t operator()(const Site& x) const noexcept;
};

void check_dimension(int d);

/// Bond directions are numbered 2*axis + (0 for -e_axis, 1 for +e_axis).
inline constexpr int direction_count(int d) { return 2 * d; }
inline constexpr int direction_axis(int dir) { return dir / 2; }
inline constexpr int direction_sign(int dir) { return (dir & 1) ? +1 : -1; }
inline constexpr int reverse_direction(int dir) { return dir ^ 1; }
Site step(const Site& x, int dir);

struct OrientedBond {
  Site from;
  int dir = 0;

  OrientedBond() = default;
  OrientedBond(const Site& from_site, int direction) : from(from_site), dir(direction) {}
  /// Throws std::invalid_argument unless the two sites are nearest neighbours.
  static OrientedBond between(const Site& from, const Site& to);

  Site to() const { return step(from, dir); }
  OrientedBond reversed() const { return {to(), reverse_direction(dir)}; }

  friend auto operator<=>(const OrientedBond&, const OrientedBond&) = default;
  friend bool operator==(const OrientedBond&, const OrientedBond&) = default;
};

/// Max-norm ball B(center, radius).
struct Box {
  Site center;
  std::int64_t radius = 0;

  Box() = default;
  Box(const Site& c, std::int64_t r);
  static Box centered(int d, std::int64_t r) { return Box(Site::origin(d), r); }

  int dim() const { return center.d; }
  bool contains(const Site& y) const;
  bool on_boundary(const Site& y) const;
  std::size_t volume() const;
  friend bool operator==(const Box&, const Box&) = default;
};

/// {y : base <= y[axis] <= base + thickness}
struct Slab {
  std::int64_t thickness = 1;
  int axis = 0;
  std::int64_t base = 0;

  bool contains(const Site& y) const;
};

/// Union over t >= 0 of the max-norm balls B(t * direction, t * amplitude).
struct Cone {
  std::vector<double> direction;
  double amplitude = 0.0;

  bool contains(const Site& z) const;
};

std::vector<Site> neighbors(const Site& x);
std::vector<Site> box_sites(const Box& b);
std::vector<Site> box_boundary(const Box& b);
/// Sites outside A adjacent to some site of A, sorted lexicographically.
std::vector<Site> exterior_vertex_boundary(std::span<const Site> a);

}  // namespace epishape
