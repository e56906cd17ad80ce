#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "epishape/cluster.hpp"
#include "epishape/field.hpp"
#include "epishape/replicas.hpp"

namespace epishape {

class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return lo <= v && v <= hi; }
  double width() const { return hi - lo; }
};

// ---- small statistics toolkit ----------------------------------------------

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);
double median(std::vector<double> xs);
/// Percentile bootstrap of the mean (or median), deterministic given `seed`.
Interval bootstrap_mean_ci(std::span<const double> xs, double level = 0.95, std::size_t resamples = 1000,
                           std::uint64_t seed = 1);
Interval bootstrap_median_ci(std::span<const double> xs, double level = 0.95, std::size_t resamples = 1000,
                             std::uint64_t seed = 1);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double r2 = 0.0;
};
/// Least squares y = a + b x. With weights, a weighted fit whose slope_se
/// treats 1/w as known variances; without, slope_se is residual based.
LineFit fit_line(std::span<const double> x, std::span<const double> y, std::span<const double> w = {});

// ---- survival and critical point ---------------------------------------------

struct SurvivalCurve {
  double lambda = 0.0;
  std::int64_t n = 0;
  Direction direction = Direction::out;
  double p_hat = 0.0;
  double se = 0.0;
  std::size_t replicas = 0;
};

/// One realisation: o -> dB_n (out) or dB_n -> o (in), paths inside B_n.
bool boundary_connection(const FieldConfig& cfg, std::int64_t n, Direction direction);

/// Replica r uses the field seeded with replica_seed(cfg.seed, r), so curves at
/// different lambda share their randomness.
SurvivalCurve survival_probability(const FieldConfig& cfg, std::int64_t n, Direction direction,
                                   std::size_t replicas, Parallelism par = {});

struct LambdaBracket {
  Direction direction = Direction::out;
  double lo = 0.0;
  double hi = 0.0;
  double p_lo = 0.0;
  double p_hi = 0.0;
  bool overlaps(const LambdaBracket& o) const { return lo <= o.hi && o.lo <= hi; }
};

struct LambdaCEstimate {
  std::int64_t n = 0;
  std::size_t replicas = 0;
  double tol = 0.0;
  LambdaBracket out;
  LambdaBracket in;
  std::vector<SurvivalCurve> evaluations;
  bool overlap() const { return out.overlaps(in); }
  double midpoint() const { return 0.25 * (out.lo + out.hi + in.lo + in.hi); }
};

/// Bisection on lambda for the crossing of the fixed-n survival curve with 1/2,
/// in both directions; brackets have width <= tol.
LambdaCEstimate estimate_lambda_c(const FieldConfig& cfg, std::int64_t n, double tol, std::size_t replicas,
                                  Parallelism par = {});
LambdaBracket bisect_lambda_c(const FieldConfig& cfg, std::int64_t n, Direction direction, double tol,
                              std::size_t replicas, Parallelism par = {},
                              std::vector<SurvivalCurve>* evaluations = nullptr);

// ---- tail fits ---------------------------------------------------------------

enum class TailModel { exp_n, exp_n_pow };

struct TailPoint {
  double n = 0.0;
  double p = 0.0;
  double se = 0.0;  // optional; > 0 for every point enables a weighted fit
};

struct TailFit {
  TailModel model = TailModel::exp_n;
  double exponent = 1.0;  // x = n^exponent
  double rate = 0.0;      // P ~ C exp(-rate x)
  double rate_se = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double n_min = 0.0;
  double n_max = 0.0;
  std::size_t points = 0;
};

std::string to_string(TailModel m);

/// Least squares of log p against n (exp_n) or n^(1/d) (exp_n_pow). Points
/// with p = 0 are dropped; fewer than four remaining is an EstimationError.
TailFit tail_fit(std::span<const TailPoint> points, TailModel model, int d = 1, bool weighted = false);

/// Empirical survival P(X >= n) for n = 1..n_max from integer samples.
std::vector<TailPoint> survival_from_samples(std::span<const std::int64_t> samples, std::int64_t n_max);

// ---- FKG ---------------------------------------------------------------------

/// A positive DNF over open-bond indicators: OR of clauses, each an AND of
/// bonds. Syntax: clauses separated by '|', bonds by '&', a bond written
/// "x1,..,xd>y1,..,yd". Any negation is rejected.
class MonotoneEvent {
 public:
  MonotoneEvent() = default;
  explicit MonotoneEvent(std::vector<std::vector<OrientedBond>> clauses);
  static MonotoneEvent parse(std::string_view text, int d);

  bool evaluate(const FieldConfig& cfg) const;
  const std::vector<std::vector<OrientedBond>>& clauses() const { return clauses_; }
  std::string to_string() const;

 private:
  std::vector<std::vector<OrientedBond>> clauses_;
};

struct FkgReport {
  double mean_u = 0.0;
  double mean_v = 0.0;
  double mean_uv = 0.0;
  double cov = 0.0;
  double se = 0.0;
  std::size_t replicas = 0;
  bool consistent() const { return cov >= -3.0 * se; }
};

FkgReport fkg_check(const FieldConfig& cfg, const MonotoneEvent& u, const MonotoneEvent& v, std::size_t replicas,
                    Parallelism par = {});

/// Cov(X(x,y), X(x,z)) for two bonds leaving the same site, by quadrature.
double same_site_covariance(const RecoveryDist& dist, double lambda);

// ---- slabs -------------------------------------------------------------------

/// The slab of thickness k used by the probe inside B(o, extent/2): it sits
/// around height 0 of the last axis and contains the box once k >= extent.
Slab probe_slab(int d, std::int64_t k, std::int64_t extent);

/// C_x^o(region) reaches lateral distance extent/2 (a non-slab coordinate of size extent/2).
bool lateral_reach(const BoxGraph& g, const Site& x, const Region& region, std::int64_t half_extent);

struct SlabReport {
  std::int64_t k = 0;
  std::int64_t extent = 0;
  std::size_t replicas = 0;
  std::vector<std::int64_t> heights;
  std::vector<double> frequency;
  double min_frequency = 0.0;
};

SlabReport slab_percolation_probe(const FieldConfig& cfg, std::int64_t k, std::int64_t extent, std::size_t replicas,
                                  Parallelism par = {});

// ---- neighbourhood tails -------------------------------------------------------

struct KappaSample {
  std::optional<std::int64_t> kappa;  // nullopt: truncated, so kappa exceeds the testable range
  std::int64_t root_radius = -1;      // max-norm radius of R_o^o ∪ R_o^i, -1 if empty
  bool roots_truncated = false;
};

KappaSample sample_kappa(const FieldConfig& cfg, std::int64_t box_radius, std::int64_t c_prime);

struct KappaTail {
  std::int64_t box_radius = 0;
  std::int64_t c_prime = 0;
  std::int64_t n_max = 0;  // largest testable kappa
  std::size_t replicas = 0;
  std::size_t truncated = 0;
  std::vector<TailPoint> kappa_survival;  // P(kappa >= n), truncated counted as exceeding n_max
  std::vector<TailPoint> root_survival;   // P(root radius >= n)
};

KappaTail kappa_tail(const FieldConfig& cfg, std::int64_t box_radius, std::int64_t c_prime, std::size_t replicas,
                     Parallelism par = {});

/// Over replicas where x -> y inside B(o, box_radius) with x = o, y = separation * e_1:
/// P(D(x,y) >= c * |x-y|_1 + n^d) for each n in n_values.
std::vector<TailPoint> conditional_chemical_tail(const FieldConfig& cfg, std::int64_t separation, double c,
                                                 std::span<const std::int64_t> n_values, std::int64_t box_radius,
                                                 std::size_t replicas, Parallelism par = {});

}  // namespace epishape
