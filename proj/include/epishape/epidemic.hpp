#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "epishape/box_graph.hpp"
#include "epishape/cluster.hpp"

namespace epishape {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// xi = immune, zeta = infected at time t.
struct StateSnapshot {
  double t = 0.0;
  std::vector<Site> xi;
  std::vector<Site> zeta;
};

/// Infection and recovery times of every site of an absorbing box, for an
/// epidemic started from the origin alone.
class EpidemicTrajectory {
 public:
  EpidemicTrajectory() = default;
  EpidemicTrajectory(Box box, double horizon, std::vector<double> infection, std::vector<double> recovery,
                     bool touched_boundary);

  const Box& box() const { return box_; }
  double horizon() const { return horizon_; }
  /// The infected set reached the box boundary by the horizon; growth data
  /// from such a run is biased by the absorbing wall.
  bool touched_boundary() const { return touched_boundary_; }

  double infection_time(const Site& x) const;
  double recovery_time(const Site& x) const;
  /// Dense per-site arrays in BoxGraph index order; infinity = never infected.
  const std::vector<double>& infection_times() const { return infection_; }
  const std::vector<double>& recovery_times() const { return recovery_; }

  StateSnapshot snapshot(double t) const;
  /// {x : infection_time(x) <= t}, sorted.
  std::vector<Site> infected_by(double t) const;
  std::size_t ever_infected() const;

  /// Columns x_1..x_d, infection_time, recovery_time; infinity as an empty field.
  /// Only sites ever infected are written.
  void write_csv(std::ostream& os) const;

 private:
  std::size_t index(const Site& x) const;

  Box box_;
  double horizon_ = 0.0;
  std::vector<double> infection_;
  std::vector<double> recovery_;
  bool touched_boundary_ = false;
};

/// Earliest-infection times from the origin over open bonds; the universe of
/// `g` is the absorbing box. Sites infected after the horizon are reported as
/// never infected.
EpidemicTrajectory run_epidemic(const BoxGraph& g, double horizon);
EpidemicTrajectory run_epidemic(const FieldConfig& cfg, const Box& box, double horizon);

/// Single- or multi-source first-passage times to every site of the universe.
/// Paths may only continue from sites inside the region; sources count as inside.
std::vector<double> passage_times_from(const BoxGraph& g, std::span<const std::size_t> sources,
                                       const Region& region = Region::all());

/// tau(x, y) within the region.
double passage_time(const BoxGraph& g, const Site& x, const Site& y, const Region& region = Region::all());

/// Minimal passage time from V(x) to V(y); zero when the neighbourhoods meet.
double tau_hat(const BoxGraph& g, const Neighborhood& nx, const Neighborhood& ny);
double tau_hat(const BoxGraph& g, const Site& x, const Site& y, const TildeC& tc, std::int64_t c_prime);

}  // namespace epishape
