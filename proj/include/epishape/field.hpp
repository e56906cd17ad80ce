#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "epishape/lattice.hpp"

namespace epishape {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Law of the infectious period T_x.
struct RecoveryDist {
  enum class Kind { constant, exponential, uniform, pareto };

  Kind kind = Kind::constant;
  double a = 1.0;  // constant: T0; exponential: mean; uniform: lower; pareto: shape
  double b = 0.0;  // uniform: upper; pareto: scale

  static RecoveryDist constant(double t0) { return {Kind::constant, t0, 0.0}; }
  static RecoveryDist exponential(double mean) { return {Kind::exponential, mean, 0.0}; }
  static RecoveryDist uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }
  static RecoveryDist pareto(double shape, double scale) { return {Kind::pareto, shape, scale}; }

  /// Parses "const:2.0", "exp:1.0", "uniform:0.5,1.5", "pareto:1.5,1.0".
  static RecoveryDist parse(std::string_view spec);
  std::string to_string() const;

  /// Rejects non-positive parameters; in particular P(T = 0) = 1 is never accepted.
  void validate() const;

  /// Inverse CDF at u in (0,1).
  double quantile(double u) const;
  double mean() const;
  /// Density on the support (0 for the degenerate constant law).
  double pdf(double t) const;
  bool has_finite_moment(double order) const;

  friend bool operator==(const RecoveryDist&, const RecoveryDist&) = default;
};

struct FieldConfig {
  int d = 3;
  double lambda = 1.0;
  RecoveryDist recovery = RecoveryDist::exponential(1.0);
  std::uint64_t seed = 0;

  void validate() const;
  FieldConfig with_lambda(double l) const {
    FieldConfig c = *this;
    c.lambda = l;
    return c;
  }
  FieldConfig with_seed(std::uint64_t s) const {
    FieldConfig c = *this;
    c.seed = s;
    return c;
  }
};

/// The two uniforms attached to one entity of the field.
struct UniformPair {
  double u1;
  double u2;
};

enum class EntityKind : std::uint32_t { recovery = 1, clock = 2, sprinkle = 3 };

UniformPair entity_uniforms(std::uint64_t seed, EntityKind kind, const Site& x, int dir);

double recovery_time(const FieldConfig& cfg, const Site& x);
/// Rate-one clock e_1(x, y); e_lambda = e_1 / lambda.
double unit_clock(const FieldConfig& cfg, const OrientedBond& b);
double edge_clock(const FieldConfig& cfg, const OrientedBond& b);
/// X(x,y) = 1{ e(x,y) < T_x }
bool is_open(const FieldConfig& cfg, const OrientedBond& b);
/// Independent Bernoulli(eps) bond variable, independent of the clocks and periods.
bool bernoulli_sprinkle(const FieldConfig& cfg, const OrientedBond& b, double eps);

/// E[(1 - exp(-lambda T))^power] by quadrature against the density of T.
double open_probability_moment(const RecoveryDist& dist, double lambda, int power);
inline double open_probability(const RecoveryDist& dist, double lambda) {
  return open_probability_moment(dist, lambda, 1);
}

}  // namespace epishape
