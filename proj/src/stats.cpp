#include "epishape/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "epishape/philox.hpp"
#include "search.hpp"

namespace epishape {

// ---- statistics toolkit -------------------------------------------------------

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw EstimationError("median of an empty sample");
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

namespace {

template <class Stat>
Interval bootstrap_ci(std::span<const double> xs, double level, std::size_t resamples, std::uint64_t seed, Stat stat) {
  if (xs.empty()) throw EstimationError("bootstrap of an empty sample");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
  std::vector<double> stats;
  stats.reserve(resamples);
  std::vector<double> buf(xs.size());
  for (std::size_t b = 0; b < resamples; ++b) {
    for (double& v : buf) v = xs[pick(rng)];
    stats.push_back(stat(buf));
  }
  std::sort(stats.begin(), stats.end());
  const double alpha = 0.5 * (1.0 - level);
  auto at = [&](double q) {
    const auto i = static_cast<std::size_t>(std::clamp(q * static_cast<double>(resamples - 1), 0.0,
                                                        static_cast<double>(resamples - 1)));
    return stats[i];
  };
  return {at(alpha), at(1.0 - alpha)};
}

}  // namespace

Interval bootstrap_mean_ci(std::span<const double> xs, double level, std::size_t resamples, std::uint64_t seed) {
  return bootstrap_ci(xs, level, resamples, seed, [](const std::vector<double>& v) { return mean(v); });
}

Interval bootstrap_median_ci(std::span<const double> xs, double level, std::size_t resamples, std::uint64_t seed) {
  return bootstrap_ci(xs, level, resamples, seed, [](const std::vector<double>& v) { return median(v); });
}

LineFit fit_line(std::span<const double> x, std::span<const double> y, std::span<const double> w) {
  const std::size_t n = x.size();
  if (n != y.size() || (!w.empty() && w.size() != n)) throw std::invalid_argument("fit_line: size mismatch");
  if (n < 2) throw EstimationError("fit_line needs at least two points");
  auto weight = [&](std::size_t i) { return w.empty() ? 1.0 : w[i]; };
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += weight(i);
    sx += weight(i) * x[i];
    sy += weight(i) * y[i];
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += weight(i) * (x[i] - mx) * (x[i] - mx);
    sxy += weight(i) * (x[i] - mx) * (y[i] - my);
    syy += weight(i) * (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw EstimationError("fit_line: abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += weight(i) * r * r;
  }
  f.r2 = syy > 0.0 ? std::max(0.0, 1.0 - ss_res / syy) : 0.0;
  if (w.empty()) {
    f.slope_se = n > 2 ? std::sqrt(ss_res / static_cast<double>(n - 2) / sxx) : 0.0;
  } else {
    f.slope_se = std::sqrt(1.0 / sxx);
  }
  return f;
}

// ---- survival -------------------------------------------------------------------

bool boundary_connection(const FieldConfig& cfg, std::int64_t n, Direction direction) {
  if (n < 1) throw std::invalid_argument("boundary connection needs n >= 1");
  const BoxGraph g(cfg, Box::centered(cfg.d, n));
  auto& marks = detail::scratch(3);
  marks.reset(g.size());
  std::vector<std::size_t> queue{g.index(Site::origin(cfg.d))};
  marks.set(queue.front(), 0);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t u = queue[head];
    if (g.on_boundary(u)) return true;
    for (int dir = 0; dir < g.directions(); ++dir) {
      const bool open = direction == Direction::out ? g.open(u, dir) : g.open_into(u, dir);
      if (!open) continue;
      const std::size_t v = g.neighbor(u, dir);
      if (v == BoxGraph::npos || marks.seen(v)) continue;
      marks.set(v, 0);
      queue.push_back(v);
    }
  }
  return false;
}

SurvivalCurve survival_probability(const FieldConfig& cfg, std::int64_t n, Direction direction,
                                   std::size_t replicas, Parallelism par) {
  if (replicas < 100) throw std::invalid_argument("survival_probability needs at least 100 replicas");
  const auto hits = map_replicas(
      replicas,
      [&](std::size_t r) -> char {
        return boundary_connection(cfg.with_seed(replica_seed(cfg.seed, r)), n, direction) ? 1 : 0;
      },
      par);
  const double count = static_cast<double>(std::count(hits.begin(), hits.end(), char{1}));
  SurvivalCurve c;
  c.lambda = cfg.lambda;
  c.n = n;
  c.direction = direction;
  c.replicas = replicas;
  c.p_hat = count / static_cast<double>(replicas);
  c.se = std::sqrt(c.p_hat * (1.0 - c.p_hat) / static_cast<double>(replicas));
  return c;
}

LambdaBracket bisect_lambda_c(const FieldConfig& cfg, std::int64_t n, Direction direction, double tol,
                              std::size_t replicas, Parallelism par, std::vector<SurvivalCurve>* evaluations) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  std::map<double, double> cache;
  auto p = [&](double lambda) {
    if (auto it = cache.find(lambda); it != cache.end()) return it->second;
    const auto curve = survival_probability(cfg.with_lambda(lambda), n, direction, replicas, par);
    if (evaluations) evaluations->push_back(curve);
    cache.emplace(lambda, curve.p_hat);
    // shared seeds make the empirical curve monotone in lambda
    auto it = cache.find(lambda);
    if (it != cache.begin() && std::prev(it)->second > curve.p_hat) {
      throw EstimationError("empirical survival curve is not monotone in lambda; increase replicas");
    }
    if (std::next(it) != cache.end() && std::next(it)->second < curve.p_hat) {
      throw EstimationError("empirical survival curve is not monotone in lambda; increase replicas");
    }
    return curve.p_hat;
  };
  double hi = 1.0;
  while (p(hi) < 0.5) {
    hi *= 2.0;
    if (hi > 1e6) throw EstimationError("survival never reaches 1/2; is the recovery law degenerate?");
  }
  double lo = hi / 2.0;
  while (p(lo) >= 0.5) {
    hi = lo;
    lo /= 2.0;
    if (lo < 1e-12) throw EstimationError("survival stays above 1/2 as lambda -> 0");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (p(mid) >= 0.5 ? hi : lo) = mid;
  }
  LambdaBracket b;
  b.direction = direction;
  b.lo = lo;
  b.hi = hi;
  b.p_lo = p(lo);
  b.p_hi = p(hi);
  return b;
}

LambdaCEstimate estimate_lambda_c(const FieldConfig& cfg, std::int64_t n, double tol, std::size_t replicas,
                                  Parallelism par) {
  LambdaCEstimate est;
  est.n = n;
  est.replicas = replicas;
  est.tol = tol;
  est.out = bisect_lambda_c(cfg, n, Direction::out, tol, replicas, par, &est.evaluations);
  est.in = bisect_lambda_c(cfg, n, Direction::in, tol, replicas, par, &est.evaluations);
  return est;
}

// ---- tail fits --------------------------------------------------------------------

std::string to_string(TailModel m) { return m == TailModel::exp_n ? "exp_n" : "exp_n_pow"; }

TailFit tail_fit(std::span<const TailPoint> points, TailModel model, int d, bool weighted) {
  if (d < 1) throw std::invalid_argument("tail_fit: d must be positive");
  TailFit fit;
  fit.model = model;
  fit.exponent = model == TailModel::exp_n ? 1.0 : 1.0 / d;
  std::vector<double> xs, ys, ws;
  for (const TailPoint& pt : points) {
    if (!(pt.p > 0.0)) continue;
    xs.push_back(std::pow(pt.n, fit.exponent));
    ys.push_back(std::log(pt.p));
    if (weighted) {
      if (!(pt.se > 0.0)) throw EstimationError("weighted tail fit needs a positive standard error at every point");
      ws.push_back((pt.p / pt.se) * (pt.p / pt.se));
    }
    fit.n_min = fit.points == 0 ? pt.n : std::min(fit.n_min, pt.n);
    fit.n_max = fit.points == 0 ? pt.n : std::max(fit.n_max, pt.n);
    ++fit.points;
  }
  if (fit.points < 4) {
    throw EstimationError("tail fit needs at least 4 points with positive probability (have " +
                          std::to_string(fit.points) + ")");
  }
  const LineFit lf = fit_line(xs, ys, ws);
  fit.rate = -lf.slope;
  fit.rate_se = lf.slope_se;
  fit.intercept = lf.intercept;
  fit.r2 = lf.r2;
  return fit;
}

std::vector<TailPoint> survival_from_samples(std::span<const std::int64_t> samples, std::int64_t n_max) {
  std::vector<TailPoint> out;
  const double total = static_cast<double>(samples.size());
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const auto c = std::count_if(samples.begin(), samples.end(), [n](std::int64_t s) { return s >= n; });
    const double p = static_cast<double>(c) / total;
    out.push_back({static_cast<double>(n), p, std::sqrt(p * (1.0 - p) / total)});
  }
  return out;
}

// ---- FKG --------------------------------------------------------------------------

MonotoneEvent::MonotoneEvent(std::vector<std::vector<OrientedBond>> clauses) : clauses_(std::move(clauses)) {}

namespace {

Site parse_site(std::string_view text, int d) {
  Site s(d);
  int axis = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto token = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    if (axis >= d) throw ConfigError("too many coordinates in site '" + std::string(text) + "'");
    std::int64_t v = 0;
    std::istringstream is{std::string(token)};
    if (!(is >> v) || !is.eof()) throw ConfigError("bad coordinate '" + std::string(token) + "'");
    s[axis++] = v;
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (axis != d) throw ConfigError("site '" + std::string(text) + "' needs " + std::to_string(d) + " coordinates");
  return s;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

MonotoneEvent MonotoneEvent::parse(std::string_view text, int d) {
  if (text.find_first_of("!~") != std::string_view::npos || text.find("not") != std::string_view::npos) {
    throw ConfigError("event '" + std::string(text) + "' is not monotone: negations are not allowed");
  }
  std::vector<std::vector<OrientedBond>> clauses;
  std::size_t pos = 0;
  while (true) {
    const auto bar = text.find('|', pos);
    const auto clause_text = trim(text.substr(pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos));
    if (clause_text.empty()) throw ConfigError("empty clause in event '" + std::string(text) + "'");
    std::vector<OrientedBond> clause;
    std::size_t p = 0;
    while (true) {
      const auto amp = clause_text.find('&', p);
      const auto bond_text =
          trim(clause_text.substr(p, amp == std::string_view::npos ? std::string_view::npos : amp - p));
      const auto arrow = bond_text.find('>');
      if (arrow == std::string_view::npos) throw ConfigError("bond '" + std::string(bond_text) + "' needs 'x>y'");
      try {
        clause.push_back(OrientedBond::between(parse_site(trim(bond_text.substr(0, arrow)), d),
                                               parse_site(trim(bond_text.substr(arrow + 1)), d)));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      if (amp == std::string_view::npos) break;
      p = amp + 1;
    }
    clauses.push_back(std::move(clause));
    if (bar == std::string_view::npos) break;
    pos = bar + 1;
  }
  return MonotoneEvent(std::move(clauses));
}

bool MonotoneEvent::evaluate(const FieldConfig& cfg) const {
  return std::any_of(clauses_.begin(), clauses_.end(), [&](const std::vector<OrientedBond>& clause) {
    return std::all_of(clause.begin(), clause.end(), [&](const OrientedBond& b) { return is_open(cfg, b); });
  });
}

std::string MonotoneEvent::to_string() const {
  std::string s;
  for (std::size_t c = 0; c < clauses_.size(); ++c) {
    if (c) s += " | ";
    for (std::size_t b = 0; b < clauses_[c].size(); ++b) {
      if (b) s += " & ";
      const auto& bond = clauses_[c][b];
      auto coords = [](const Site& x) {
        std::string t = epishape::to_string(x);
        return t.substr(1, t.size() - 2);
      };
      s += coords(bond.from) + ">" + coords(bond.to());
    }
  }
  return s;
}

FkgReport fkg_check(const FieldConfig& cfg, const MonotoneEvent& u, const MonotoneEvent& v, std::size_t replicas,
                    Parallelism par) {
  if (replicas < 2) throw std::invalid_argument("fkg_check needs at least 2 replicas");
  struct Pair {
    char u = 0;
    char v = 0;
  };
  const auto samples = map_replicas(
      replicas,
      [&](std::size_t r) {
        const FieldConfig c = cfg.with_seed(replica_seed(cfg.seed, r));
        return Pair{static_cast<char>(u.evaluate(c)), static_cast<char>(v.evaluate(c))};
      },
      par);
  FkgReport rep;
  rep.replicas = replicas;
  const double n = static_cast<double>(replicas);
  double su = 0, sv = 0, suv = 0;
  for (const Pair& s : samples) {
    su += s.u;
    sv += s.v;
    suv += s.u * s.v;
  }
  rep.mean_u = su / n;
  rep.mean_v = sv / n;
  rep.mean_uv = suv / n;
  rep.cov = rep.mean_uv - rep.mean_u * rep.mean_v;
  double s2 = 0.0;
  for (const Pair& s : samples) {
    const double w = (s.u - rep.mean_u) * (s.v - rep.mean_v);
    s2 += (w - rep.cov) * (w - rep.cov);
  }
  rep.se = std::sqrt(s2 / (n - 1.0) / n);
  return rep;
}

double same_site_covariance(const RecoveryDist& dist, double lambda) {
  const double m1 = open_probability_moment(dist, lambda, 1);
  const double m2 = open_probability_moment(dist, lambda, 2);
  return m2 - m1 * m1;
}

// ---- slabs ------------------------------------------------------------------------

Slab probe_slab(int d, std::int64_t k, std::int64_t extent) {
  if (k < 1) throw std::invalid_argument("slab thickness must be positive");
  if (extent < 2 || extent % 2) throw std::invalid_argument("slab extent must be a positive even number");
  const std::int64_t half = extent / 2;
  return Slab{k, d - 1, std::max(-half, -(k / 2))};
}

bool lateral_reach(const BoxGraph& g, const Site& x, const Region& region, std::int64_t half_extent) {
  const std::size_t xi = g.index(x);
  if (!region.contains(g, xi)) return false;
  auto& marks = detail::scratch(3);
  const std::size_t src[] = {xi};
  auto allowed = [&](std::size_t v) { return region.contains(g, v); };
  const auto res = detail::bfs(g, src, Direction::out, allowed, -1, marks);
  const int lateral_axes = g.dim() - 1;
  for (std::size_t v : res.order) {
    for (int axis = 0; axis < lateral_axes; ++axis) {
      const std::int64_t c = g.coord(v, axis) - x[axis];
      if (c == half_extent || c == -half_extent) return true;
    }
  }
  return false;
}

SlabReport slab_percolation_probe(const FieldConfig& cfg, std::int64_t k, std::int64_t extent, std::size_t replicas,
                                  Parallelism par) {
  const Slab slab = probe_slab(cfg.d, k, extent);
  const std::int64_t half = extent / 2;
  const Box box = Box::centered(cfg.d, half);
  SlabReport rep;
  rep.k = k;
  rep.extent = extent;
  rep.replicas = replicas;
  for (std::int64_t h = slab.base; h <= std::min(slab.base + k, half); ++h) rep.heights.push_back(h);
  const Region region = Region::slab(slab, box);
  const auto hits = map_replicas(
      replicas,
      [&](std::size_t r) {
        const BoxGraph g(cfg.with_seed(replica_seed(cfg.seed, r)), box);
        std::vector<char> row;
        for (std::int64_t h : rep.heights) {
          Site x = Site::origin(cfg.d);
          x[cfg.d - 1] = h;
          row.push_back(lateral_reach(g, x, region, half) ? 1 : 0);
        }
        return row;
      },
      par);
  rep.frequency.assign(rep.heights.size(), 0.0);
  for (const auto& row : hits) {
    for (std::size_t i = 0; i < row.size(); ++i) rep.frequency[i] += row[i];
  }
  for (double& f : rep.frequency) f /= static_cast<double>(replicas);
  rep.min_frequency = *std::min_element(rep.frequency.begin(), rep.frequency.end());
  return rep;
}

// ---- neighbourhood tails ---------------------------------------------------------

KappaSample sample_kappa(const FieldConfig& cfg, std::int64_t box_radius, std::int64_t c_prime) {
  const BoxGraph g(cfg, Box::centered(cfg.d, box_radius));
  const TildeC tc = tilde_c(g);
  const Site o = Site::origin(cfg.d);
  const RootPair rp = roots(g, o, tc);
  KappaSample s;
  for (const auto* set : {&rp.out, &rp.in}) {
    for (const Site& y : *set) s.root_radius = std::max(s.root_radius, norm_inf(y));
  }
  s.roots_truncated = rp.truncated;
  if (rp.truncated) return s;
  try {
    s.kappa = kappa(g, o, tc, c_prime, false).kappa;
  } catch (const TruncationError&) {
    s.kappa.reset();
  }
  return s;
}

KappaTail kappa_tail(const FieldConfig& cfg, std::int64_t box_radius, std::int64_t c_prime, std::size_t replicas,
                     Parallelism par) {
  KappaTail tail;
  tail.box_radius = box_radius;
  tail.c_prime = c_prime;
  tail.n_max = box_radius / c_prime;
  tail.replicas = replicas;
  const auto samples = map_replicas(
      replicas, [&](std::size_t r) { return sample_kappa(cfg.with_seed(replica_seed(cfg.seed, r)), box_radius, c_prime); },
      par);
  std::vector<std::int64_t> kappas;
  std::vector<std::int64_t> radii;
  for (const auto& s : samples) {
    if (!s.kappa) ++tail.truncated;
    kappas.push_back(s.kappa.value_or(tail.n_max + 1));
    radii.push_back(s.roots_truncated ? box_radius : s.root_radius);
  }
  tail.kappa_survival = survival_from_samples(kappas, tail.n_max + 1);
  tail.root_survival = survival_from_samples(radii, box_radius);
  return tail;
}

std::vector<TailPoint> conditional_chemical_tail(const FieldConfig& cfg, std::int64_t separation, double c,
                                                 std::span<const std::int64_t> n_values, std::int64_t box_radius,
                                                 std::size_t replicas, Parallelism par) {
  const Box box = Box::centered(cfg.d, box_radius);
  const auto dists = map_replicas(
      replicas,
      [&](std::size_t r) -> std::int64_t {
        const BoxGraph g(cfg.with_seed(replica_seed(cfg.seed, r)), box);
        const auto dist = chemical_distance(g, Site::origin(cfg.d), Site::unit(cfg.d, 0).scaled(separation),
                                            Region::all());
        return dist.value_or(-1);
      },
      par);
  std::vector<std::int64_t> connected;
  for (auto v : dists) {
    if (v >= 0) connected.push_back(v);
  }
  if (connected.empty()) throw EstimationError("no replica connects the two sites; lambda may be subcritical");
  std::vector<TailPoint> out;
  const double total = static_cast<double>(connected.size());
  for (std::int64_t n : n_values) {
    const double threshold = c * static_cast<double>(separation) + std::pow(static_cast<double>(n), cfg.d);
    const auto count = std::count_if(connected.begin(), connected.end(),
                                     [&](std::int64_t v) { return static_cast<double>(v) >= threshold; });
    const double p = static_cast<double>(count) / total;
    out.push_back({static_cast<double>(n), p, std::sqrt(p * (1.0 - p) / total)});
  }
  return out;
}

}  // namespace epishape
