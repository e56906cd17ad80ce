#include "epishape/field.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "epishape/philox.hpp"

namespace epishape {

namespace {

double parse_number(std::string_view text, std::string_view spec) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError("bad number '" + std::string(text) + "' in recovery spec '" + std::string(spec) + "'");
  }
  return v;
}

std::vector<double> parse_params(std::string_view text, std::string_view spec) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_number(text.substr(0, comma), spec));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

RecoveryDist RecoveryDist::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("recovery spec '" + std::string(spec) + "' must look like kind:params");
  }
  const auto kind = spec.substr(0, colon);
  const auto params = parse_params(spec.substr(colon + 1), spec);
  auto expect = [&](std::size_t n) {
    if (params.size() != n) {
      throw ConfigError("recovery kind '" + std::string(kind) + "' takes " + std::to_string(n) + " parameter(s)");
    }
  };
  RecoveryDist dist;
  if (kind == "const" || kind == "constant") {
    expect(1);
    dist = constant(params[0]);
  } else if (kind == "exp" || kind == "exponential") {
    expect(1);
    dist = exponential(params[0]);
  } else if (kind == "uniform") {
    expect(2);
    dist = uniform(params[0], params[1]);
  } else if (kind == "pareto") {
    expect(2);
    dist = pareto(params[0], params[1]);
  } else {
    throw ConfigError("unknown recovery kind '" + std::string(kind) + "'");
  }
  dist.validate();
  return dist;
}

std::string RecoveryDist::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::constant: os << "const:" << a; break;
    case Kind::exponential: os << "exp:" << a; break;
    case Kind::uniform: os << "uniform:" << a << ',' << b; break;
    case Kind::pareto: os << "pareto:" << a << ',' << b; break;
  }
  return os.str();
}

void RecoveryDist::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("recovery parameter ") + what + " must be finite and > 0");
    }
  };
  switch (kind) {
    case Kind::constant: positive(a, "T0"); break;
    case Kind::exponential: positive(a, "mean"); break;
    case Kind::uniform:
      positive(a, "lower");
      positive(b, "upper");
      if (!(b > a)) throw ConfigError("uniform recovery needs lower < upper");
      break;
    case Kind::pareto:
      positive(a, "shape");
      positive(b, "scale");
      break;
  }
}

double RecoveryDist::quantile(double u) const {
  switch (kind) {
    case Kind::constant: return a;
    case Kind::exponential: return -a * std::log1p(-u);
    case Kind::uniform: return a + (b - a) * u;
    case Kind::pareto: return b * std::pow(1.0 - u, -1.0 / a);
  }
  return a;
}

double RecoveryDist::mean() const {
  switch (kind) {
    case Kind::constant: return a;
    case Kind::exponential: return a;
    case Kind::uniform: return 0.5 * (a + b);
    case Kind::pareto: return a > 1.0 ? a * b / (a - 1.0) : std::numeric_limits<double>::infinity();
  }
  return a;
}

double RecoveryDist::pdf(double t) const {
  switch (kind) {
    case Kind::constant: return 0.0;
    case Kind::exponential: return t < 0 ? 0.0 : std::exp(-t / a) / a;
    case Kind::uniform: return (t < a || t > b) ? 0.0 : 1.0 / (b - a);
    case Kind::pareto: return t < b ? 0.0 : a * std::pow(b, a) / std::pow(t, a + 1.0);
  }
  return 0.0;
}

bool RecoveryDist::has_finite_moment(double order) const {
  return kind != Kind::pareto || order < a;
}

void FieldConfig::validate() const {
  check_dimension(d);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be finite and > 0");
  recovery.validate();
}

UniformPair entity_uniforms(std::uint64_t seed, EntityKind kind, const Site& x, int dir) {
  // 22 bits per offset coordinate, 4 bits kind, 3 bits direction: 95 of 128 counter bits.
  constexpr std::uint64_t kMask = (std::uint64_t{1} << 22) - 1;
  std::uint64_t packed[4] = {};
  for (int i = 0; i < kMaxDim; ++i) {
    const std::int64_t v = i < x.d ? x[i] : 0;
    packed[i] = static_cast<std::uint64_t>(v + kMaxCoord) & kMask;
  }
  const std::uint64_t lo = packed[0] | (packed[1] << 22) | (packed[2] << 44);
  const std::uint64_t hi = (packed[2] >> 20) | (packed[3] << 2) |
                           (std::uint64_t{static_cast<std::uint32_t>(kind)} << 24) |
                           (static_cast<std::uint64_t>(dir & 7) << 28) |
                           (static_cast<std::uint64_t>(x.d) << 31);
  const PhiloxCounter ctr{static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(lo >> 32),
                          static_cast<std::uint32_t>(hi), static_cast<std::uint32_t>(hi >> 32)};
  const PhiloxKey key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  const auto out = philox4x32_10(ctr, key);
  const std::uint64_t w1 = (std::uint64_t{out[0]} << 32) | out[1];
  const std::uint64_t w2 = (std::uint64_t{out[2]} << 32) | out[3];
  return {open_unit_interval(w1), open_unit_interval(w2)};
}

double recovery_time(const FieldConfig& cfg, const Site& x) {
  return cfg.recovery.quantile(entity_uniforms(cfg.seed, EntityKind::recovery, x, 0).u1);
}

double unit_clock(const FieldConfig& cfg, const OrientedBond& b) {
  return -std::log(entity_uniforms(cfg.seed, EntityKind::clock, b.from, b.dir).u1);
}

double edge_clock(const FieldConfig& cfg, const OrientedBond& b) { return unit_clock(cfg, b) / cfg.lambda; }

bool is_open(const FieldConfig& cfg, const OrientedBond& b) {
  return edge_clock(cfg, b) < recovery_time(cfg, b.from);
}

bool bernoulli_sprinkle(const FieldConfig& cfg, const OrientedBond& b, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("sprinkle probability must lie in [0,1]");
  return entity_uniforms(cfg.seed, EntityKind::sprinkle, b.from, b.dir).u1 < eps;
}

double open_probability_moment(const RecoveryDist& dist, double lambda, int power) {
  dist.validate();
  auto g = [lambda, power](double t) { return std::pow(-std::expm1(-lambda * t), power); };
  using Kind = RecoveryDist::Kind;
  switch (dist.kind) {
    case Kind::constant: return g(dist.a);
    case Kind::uniform: {
      auto f = [&](double t) { return g(t) * dist.pdf(t); };
      return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, dist.a, dist.b, 15, 1e-13);
    }
    case Kind::exponential:
    case Kind::pareto: {
      const double lo = dist.kind == Kind::pareto ? dist.b : 0.0;
      auto f = [&](double t) { return g(lo + t) * dist.pdf(lo + t); };
      boost::math::quadrature::exp_sinh<double> integrator;
      return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-12);
    }
  }
  return 0.0;
}

}  // namespace epishape
