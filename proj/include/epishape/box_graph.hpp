#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "epishape/field.hpp"
#include "epishape/lattice.hpp"

namespace epishape {

/// The random field restricted to a finite universe box, with dense site
/// indexing. Index order equals lexicographic site order. Per-site data
/// (T_x, the 2d outgoing clocks, the open mask) is filled on first access or
/// all at once by materialize(); both routes call the same field functions,
/// so values are bit-identical to the stateless API.
///
/// Lazy filling mutates caches from const accessors: one graph per thread.
class BoxGraph {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  BoxGraph(const FieldConfig& cfg, const Box& universe);

  const FieldConfig& config() const { return cfg_; }
  const Box& box() const { return box_; }
  int dim() const { return box_.dim(); }
  int directions() const { return 2 * box_.dim(); }
  std::size_t size() const { return size_; }

  bool contains(const Site& x) const { return box_.contains(x); }
  std::size_t index(const Site& x) const;
  Site site(std::size_t idx) const;
  std::int64_t coord(std::size_t idx, int axis) const {
    return static_cast<std::int64_t>((idx / stride_[axis]) % side_) - box_.radius + box_.center[axis];
  }
  /// Max-norm distance from the universe centre.
  std::int64_t radius_of(std::size_t idx) const;
  bool on_boundary(std::size_t idx) const { return radius_of(idx) == box_.radius; }
  /// Index of the neighbour in direction dir, or npos when it lies outside the universe.
  std::size_t neighbor(std::size_t idx, int dir) const {
    const int axis = dir >> 1;
    const std::int64_t off = static_cast<std::int64_t>((idx / stride_[axis]) % side_);
    if (dir & 1) return off + 1 < static_cast<std::int64_t>(side_) ? idx + stride_[axis] : npos;
    return off > 0 ? idx - stride_[axis] : npos;
  }

  double recovery(std::size_t idx) const {
    fill(idx);
    return recovery_[idx];
  }
  /// Bit dir set iff the bond (x, x + dir) is open; exits from the universe included.
  std::uint8_t out_mask(std::size_t idx) const {
    fill(idx);
    return static_cast<std::uint8_t>(mask_[idx]);
  }
  bool open(std::size_t idx, int dir) const { return (out_mask(idx) >> dir) & 1u; }
  /// e_lambda(x, x + dir)
  double clock(std::size_t idx, int dir) const {
    fill(idx);
    return clock_[idx * static_cast<std::size_t>(directions()) + static_cast<std::size_t>(dir)];
  }
  /// Whether the bond (x + dir, x) into idx is open; evaluates the field
  /// directly when x + dir is outside the universe.
  bool open_into(std::size_t idx, int dir) const;

  /// Fills every site. Parallel over sites with OpenMP.
  void materialize();
  /// Reference fill, one site at a time.
  void materialize_serial();
  bool filled(std::size_t idx) const { return mask_[idx] != kUnfilled; }

 private:
  static constexpr std::uint16_t kUnfilled = 0xFFFF;  // d = 4 uses all 8 mask bits

  void fill(std::size_t idx) const {
    if (mask_[idx] == kUnfilled) fill_site(idx);
  }
  void fill_site(std::size_t idx) const;

  FieldConfig cfg_;
  Box box_;
  std::size_t side_ = 0;
  std::size_t size_ = 0;
  std::size_t stride_[kMaxDim] = {};
  mutable std::vector<double> recovery_;
  mutable std::vector<double> clock_;
  mutable std::vector<std::uint16_t> mask_;
};

}  // namespace epishape
