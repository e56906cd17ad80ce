#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "epishape/box_graph.hpp"
#include "epishape/lattice.hpp"

namespace epishape {

/// Raised when a finite-volume computation would need sites beyond the universe box.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Direction { out, in };

class TildeC;

/// Path constraint for "within A" / "outside A" searches. Membership is pure.
class Region {
 public:
  enum class Kind { all, box, slab, complement };

  static Region all() { return Region(Kind::all); }
  static Region box(const Box& b);
  /// Slab clipped to a box.
  static Region slab(const Slab& s, const Box& clip);
  static Region complement_of(std::vector<Site> sites);
  static Region complement_of(const TildeC& tc);

  Kind kind() const { return kind_; }
  bool contains(const Site& y) const;
  /// Same as contains(g.site(idx)), without decoding when possible.
  bool contains(const BoxGraph& g, std::size_t idx) const;

 private:
  explicit Region(Kind k) : kind_(k) {}

  Kind kind_;
  Box box_;
  Slab slab_;
  std::shared_ptr<const std::unordered_set<Site, SiteHash>> excluded_;
  std::shared_ptr<const std::vector<char>> excluded_mask_;  // indexed like the C~ universe
  Box mask_box_;
};

struct ClusterReport {
  Site root;
  Direction direction = Direction::out;
  /// Sorted lexicographically; hops[i] belongs to sites[i].
  std::vector<Site> sites;
  std::vector<std::int64_t> hops;
  /// Some open bond leaves the explored set towards a site outside the region.
  bool touched_boundary = false;

  bool contains(const Site& y) const;
  std::optional<std::int64_t> hop(const Site& y) const;
};

/// C_x^o(A) (direction out) or C_x^i(A) (direction in) with minimal hop counts.
/// hop_budget < 0 means unlimited.
ClusterReport cluster(const BoxGraph& g, const Site& x, Direction direction, const Region& region,
                      std::int64_t hop_budget = -1);

/// D(x, y) within the region: min bonds over open paths x_0 = x, ..., x_n = y
/// with x_0..x_{n-1} in the region. nullopt = unreachable.
std::optional<std::int64_t> chemical_distance(const BoxGraph& g, const Site& x, const Site& y,
                                              const Region& region);

/// Finite-volume proxy for the bi-infinite backbone: x is a member iff some open
/// path from x leaves the universe box and some open path from outside enters
/// it and reaches x, in both cases through universe sites only.
class TildeC {
 public:
  TildeC() = default;
  TildeC(Box universe, std::vector<char> members);

  const Box& box() const { return box_; }
  std::int64_t radius() const { return box_.radius; }
  bool contains(std::size_t idx) const { return members_[idx] != 0; }
  bool contains(const Site& x) const;
  std::size_t count() const;
  std::vector<Site> sites() const;
  const std::vector<char>& mask() const { return members_; }

 private:
  Box box_;
  std::vector<char> members_;
};

TildeC tilde_c(const BoxGraph& g);

struct RootPair {
  Site x;
  std::vector<Site> out;  // R_x^o, sorted
  std::vector<Site> in;   // R_x^i, sorted
  /// A root reached the universe boundary, so it may extend past the box.
  bool truncated = false;
};

RootPair roots(const BoxGraph& g, const Site& x, const TildeC& tc);

struct Neighborhood {
  Site x;
  std::int64_t kappa = 0;
  std::int64_t c_prime = 0;
  std::vector<Site> V;                   // B(x,kappa) ∩ C~, sorted
  std::vector<OrientedBond> gamma_bar;   // sorted, unique
  bool has_bonds = false;
};

/// kappa(x), V(x) and, with `bonds`, the bond neighbourhood (the costly part:
/// one geodesic search per site of V). Throws TruncationError when the
/// roots touch the universe boundary or no admissible l has B(x, c_prime * l)
/// inside the universe.
Neighborhood kappa(const BoxGraph& g, const Site& x, const TildeC& tc, std::int64_t c_prime, bool bonds = true);

/// Sum of passage times over the bond neighbourhood.
double u_weight(const BoxGraph& g, const Neighborhood& nb);

/// Largest l that kappa may test for x.
std::int64_t kappa_limit(const BoxGraph& g, const Site& x, std::int64_t c_prime);

}  // namespace epishape
