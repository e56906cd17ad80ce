#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "epishape/epidemic.hpp"
#include "epishape/field.hpp"
#include "epishape/replicas.hpp"
#include "epishape/stats.hpp"

namespace epishape {

using Vec = std::vector<double>;

// ---- radial limits --------------------------------------------------------------

struct RadialOptions {
  Site z;
  std::vector<std::int64_t> n_values;  // increasing
  std::size_t replicas = 100;
  std::int64_t box_radius = 32;
  std::int64_t c_prime = 8;
  Parallelism par;
};

struct RadialEstimate {
  Site z;
  std::vector<std::int64_t> n_values;
  /// ratios[i][j] = tau_hat(o, n_j z) / n_j for the i-th included replica.
  std::vector<std::vector<double>> ratios;
  std::vector<std::size_t> replica_ids;
  std::vector<double> mean_ratio;  // per n
  std::vector<Interval> ci;        // per n, bootstrap 95%
  double mu_hat = 0.0;             // mean ratio at the largest n
  Interval mu_ci;
  std::size_t excluded_outside_cluster = 0;
  std::size_t excluded_truncated = 0;
};

/// tau_hat(o, n z) / n over replicas, for replicas in which every n z is
/// reached from the origin.
RadialEstimate radial_limit(const FieldConfig& cfg, const RadialOptions& opt);

// ---- shape ----------------------------------------------------------------------------

/// Unit vectors along every non-zero integer vector with entries in
/// [-refinement, refinement], one per direction, sorted.
std::vector<Vec> direction_grid(int d, int refinement);

struct DirectionalRadius {
  Vec direction;
  double radius = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct ReplicaCloud {
  std::size_t replica = 0;
  std::vector<Site> sites;  // rescale by 1/t for the cloud
};

struct ShapeOptions {
  double t = 10.0;
  std::size_t replicas = 50;
  std::int64_t box_radius = 32;
  int refinement = 2;
  bool keep_clouds = false;
  Parallelism par;
};

struct ShapeEstimate {
  double t = 0.0;
  int d = 0;
  std::vector<DirectionalRadius> radii;
  std::vector<ReplicaCloud> clouds;
  std::size_t included = 0;
  std::size_t excluded_extinct = 0;
  std::size_t boundary_biased = 0;  // included replicas whose infected set touched the box by time t

  /// Directional speed phi(u) = 1 / radius(u) for each grid direction.
  std::vector<double> phi_table() const;
};

/// Largest projection onto u, divided by t, of the sites of `infected` lying
/// within half a cell diagonal of the ray {s u : s >= 0}.
double directional_radius(std::span<const Site> infected, const Vec& u, double t);

ShapeEstimate estimate_shape(const FieldConfig& cfg, const ShapeOptions& opt);
/// Builds the estimate from per-replica trajectories (all surviving).
ShapeEstimate shape_from_trajectories(std::span<const EpidemicTrajectory> runs, double t, int refinement);

/// Positively homogeneous interpolant: |x| times the interpolated directional speed.
double phi(const ShapeEstimate& shape, std::span<const double> x);
double phi(const ShapeEstimate& shape, const Site& x);
/// x / |x| is farther from every grid direction than the grid's own spacing.
bool phi_extrapolates(const ShapeEstimate& shape, std::span<const double> x);

/// Symmetric Hausdorff distance between the boundary point sets {r(u) u}.
double hausdorff_distance(const ShapeEstimate& a, const ShapeEstimate& b);

/// Finite-volume survival: C_o^o reaches the boundary of the half-size box.
bool survives(const BoxGraph& g);

// ---- sandwich --------------------------------------------------------------------------

struct SandwichRow {
  double t = 0.0;
  double inner_violation = 0.0;  // (1-eps) t D ∩ C_o^o not yet infected, over |(1-eps) t D ∩ C_o^o|
  double outer_violation = 0.0;  // infected by t outside (1+eps) t D, over |infected by t|
  double annulus_fraction = 0.0; // zeta_t inside (1-eps) t D, over |zeta_t|
  std::size_t replicas = 0;
  std::size_t boundary_biased = 0;
};

struct SandwichReport {
  double eps = 0.0;
  std::vector<SandwichRow> rows;
  std::size_t excluded_extinct = 0;
};

SandwichRow sandwich_row(std::span<const EpidemicTrajectory> runs, const ShapeEstimate& shape, double eps, double t);
/// Replica seeds are offset from those used for `shape`.
SandwichReport sandwich_check(const FieldConfig& cfg, const ShapeEstimate& shape, double eps,
                              std::span<const double> t_ladder, std::size_t replicas, std::int64_t box_radius,
                              Parallelism par = {});

// ---- linear growth ------------------------------------------------------------------------

struct LinearGrowthRow {
  double K = 0.0;
  std::vector<TailPoint> exceedance;  // P(tau_hat(o,z) > K |z|_inf) per radius
  std::optional<TailFit> fit;         // exp_n_pow in |z|_inf
  bool accepted = false;              // negative slope (positive rate) and r2 >= 0.9
};

struct LinearGrowthReport {
  std::vector<std::int64_t> radii;
  std::vector<LinearGrowthRow> rows;
  std::optional<double> smallest_accepted_K;
  std::size_t samples_per_radius = 0;
  std::size_t truncated = 0;
};

LinearGrowthReport linear_growth_tail(const FieldConfig& cfg, std::span<const double> k_grid,
                                      std::span<const std::int64_t> radii, std::size_t replicas,
                                      std::int64_t box_radius, std::int64_t c_prime, Parallelism par = {});

// ---- moments -------------------------------------------------------------------------------

struct MomentRow {
  int order = 0;
  double value = 0.0;
  Interval ci;
};

struct MomentReport {
  std::vector<MomentRow> u_moments;        // E[u(o)^r]
  std::vector<MomentRow> tau_hat_moments;  // E[tau_hat(o, s e_1)^r]
  std::size_t samples = 0;
  std::size_t truncated = 0;
};

MomentReport neighborhood_moments(const FieldConfig& cfg, std::int64_t separation, int max_order,
                                  std::size_t replicas, std::int64_t box_radius, std::int64_t c_prime,
                                  Parallelism par = {});

}  // namespace epishape
