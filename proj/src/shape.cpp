#include "epishape/shape.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "epishape/philox.hpp"

namespace epishape {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

Vec to_vec(const Site& x) {
  Vec v(static_cast<std::size_t>(x.d));
  for (int i = 0; i < x.d; ++i) v[static_cast<std::size_t>(i)] = static_cast<double>(x.c[i]);
  return v;
}

double angle(std::span<const double> u, std::span<const double> v) {
  return std::acos(std::clamp(dot(u, v), -1.0, 1.0));
}

// Minimal passage time from the sources to any site of targets.
double min_over(const std::vector<double>& times, const BoxGraph& g, const std::vector<Site>& targets) {
  double best = kInfinity;
  for (const auto& y : targets) best = std::min(best, times[g.index(y)]);
  return best;
}

std::vector<std::size_t> indices_of(const BoxGraph& g, const std::vector<Site>& sites) {
  std::vector<std::size_t> out;
  out.reserve(sites.size());
  for (const auto& s : sites) out.push_back(g.index(s));
  return out;
}

}  // namespace

// ---- radial limits ----------------------------------------------------------------

RadialEstimate radial_limit(const FieldConfig& cfg, const RadialOptions& opt) {
  cfg.validate();
  if (opt.n_values.empty()) throw std::invalid_argument("radial_limit needs at least one n");
  if (!std::is_sorted(opt.n_values.begin(), opt.n_values.end()) || opt.n_values.front() < 1)
    throw std::invalid_argument("n values must be positive and increasing");
  if (opt.z.d != cfg.d) throw std::invalid_argument("z has the wrong dimension");
  const std::int64_t reach = opt.n_values.back() * norm_inf(opt.z);
  if (reach >= opt.box_radius) throw std::invalid_argument("n_max * |z| does not fit the box");

  RadialEstimate est;
  est.z = opt.z;
  est.n_values = opt.n_values;
  const std::size_t m = opt.n_values.size();
  const Site origin = Site::origin(cfg.d);

  if (opt.z == origin) {
    est.ratios.assign(opt.replicas, std::vector<double>(m, 0.0));
    est.replica_ids.resize(opt.replicas);
    std::iota(est.replica_ids.begin(), est.replica_ids.end(), std::size_t{0});
    est.mean_ratio.assign(m, 0.0);
    est.ci.assign(m, Interval{0.0, 0.0});
    est.mu_ci = Interval{0.0, 0.0};
    return est;
  }

  enum Outcome : int { ok, outside, truncated };
  struct Replica {
    int outcome = ok;
    std::vector<double> ratios;
  };
  const auto runs = map_replicas(
      opt.replicas,
      [&](std::size_t r) {
        Replica rep;
        BoxGraph g(cfg.with_seed(replica_seed(cfg.seed, r)), Box::centered(cfg.d, opt.box_radius));
        const TildeC tc = tilde_c(g);
        try {
          const Neighborhood no = kappa(g, origin, tc, opt.c_prime, false);
          const auto src = indices_of(g, no.V);
          const auto times = passage_times_from(g, src);
          const std::size_t o_idx[] = {g.index(origin)};
          const auto from_o = passage_times_from(g, o_idx);
          for (std::int64_t n : opt.n_values) {
            const Site y = opt.z.scaled(n);
            if (std::isinf(from_o[g.index(y)])) {
              rep.outcome = outside;
              return rep;
            }
            const Neighborhood ny = kappa(g, y, tc, opt.c_prime, false);
            rep.ratios.push_back(min_over(times, g, ny.V) / static_cast<double>(n));
          }
        } catch (const TruncationError&) {
          rep.outcome = truncated;
        }
        return rep;
      },
      opt.par);

  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (runs[r].outcome == outside) {
      ++est.excluded_outside_cluster;
    } else if (runs[r].outcome == truncated) {
      ++est.excluded_truncated;
    } else if (std::any_of(runs[r].ratios.begin(), runs[r].ratios.end(), [](double v) { return std::isinf(v); })) {
      // the neighbourhoods are joined only through sites beyond the box
      ++est.excluded_truncated;
    } else {
      est.ratios.push_back(runs[r].ratios);
      est.replica_ids.push_back(r);
    }
  }
  if (est.ratios.size() < 2) {
    if (est.excluded_truncated > est.excluded_outside_cluster)
      throw TruncationError("radial_limit: neighbourhoods truncated in " + std::to_string(est.excluded_truncated) +
                            " replicas; increase box_radius");
    throw EstimationError("radial_limit: all replicas excluded (subcritical or box too small)");
  }

  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> col;
    col.reserve(est.ratios.size());
    for (const auto& row : est.ratios) col.push_back(row[j]);
    est.mean_ratio.push_back(mean(col));
    est.ci.push_back(bootstrap_mean_ci(col, 0.95, 1000, cfg.seed + j));
  }
  est.mu_hat = est.mean_ratio.back();
  est.mu_ci = est.ci.back();
  est.mu_ci.lo = std::min(est.mu_ci.lo, est.mu_hat);
  est.mu_ci.hi = std::max(est.mu_ci.hi, est.mu_hat);
  return est;
}

// ---- shape ----------------------------------------------------------------------------

std::vector<Vec> direction_grid(int d, int refinement) {
  check_dimension(d);
  if (refinement < 1) throw std::invalid_argument("refinement must be >= 1");
  std::vector<std::vector<int>> ints;
  std::vector<int> v(static_cast<std::size_t>(d), -refinement);
  for (;;) {
    int g = 0;
    for (int c : v) g = std::gcd(g, std::abs(c));
    if (g == 1) ints.push_back(v);
    int i = d - 1;
    while (i >= 0 && v[static_cast<std::size_t>(i)] == refinement) v[static_cast<std::size_t>(i--)] = -refinement;
    if (i < 0) break;
    ++v[static_cast<std::size_t>(i)];
  }
  std::vector<Vec> out;
  out.reserve(ints.size());
  for (const auto& iv : ints) {
    Vec u(iv.begin(), iv.end());
    const double n = norm2(u);
    for (auto& c : u) c /= n;
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<double> ShapeEstimate::phi_table() const {
  std::vector<double> out;
  out.reserve(radii.size());
  for (const auto& r : radii) out.push_back(r.radius > 0 ? 1.0 / r.radius : kInfinity);
  return out;
}

double directional_radius(std::span<const Site> infected, const Vec& u, double t) {
  if (!(t > 0)) throw std::invalid_argument("t must be positive");
  const double tube = 0.5 * std::sqrt(static_cast<double>(u.size()));
  double best = 0.0;
  for (const auto& x : infected) {
    double s = 0.0;
    double xx = 0.0;
    for (int i = 0; i < x.d; ++i) {
      const double c = static_cast<double>(x.c[i]);
      s += c * u[static_cast<std::size_t>(i)];
      xx += c * c;
    }
    if (s <= best * t) continue;
    const double perp2 = std::max(0.0, xx - s * s);
    if (perp2 <= tube * tube) best = s / t;
  }
  return best;
}

bool survives(const BoxGraph& g) {
  const int d = g.dim();
  const std::int64_t half = g.box().radius / 2;
  const auto rep = cluster(g, Site::origin(d), Direction::out, Region::box(Box::centered(d, half)));
  return std::any_of(rep.sites.begin(), rep.sites.end(), [&](const Site& s) { return norm_inf(s) >= half; });
}

namespace {

std::vector<double> radii_of(std::span<const Site> cloud, const std::vector<Vec>& grid, double t) {
  std::vector<double> r;
  r.reserve(grid.size());
  for (const auto& u : grid) r.push_back(directional_radius(cloud, u, t));
  return r;
}

/// per_replica[i][k]: radius of replica i in grid direction k.
ShapeEstimate aggregate(const std::vector<std::vector<double>>& per_replica, const std::vector<Vec>& grid, double t,
                        int d) {
  ShapeEstimate est;
  est.t = t;
  est.d = d;
  est.included = per_replica.size();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> rs;
    rs.reserve(per_replica.size());
    for (const auto& row : per_replica) rs.push_back(row[k]);
    DirectionalRadius dr;
    dr.direction = grid[k];
    if (!rs.empty()) {
      dr.radius = median(rs);
      const Interval ci = bootstrap_median_ci(rs, 0.95, 1000, 17 + k);
      dr.ci_lo = std::min(ci.lo, dr.radius);
      dr.ci_hi = std::max(ci.hi, dr.radius);
    }
    est.radii.push_back(std::move(dr));
  }
  return est;
}

}  // namespace

ShapeEstimate shape_from_trajectories(std::span<const EpidemicTrajectory> runs, double t, int refinement) {
  if (runs.empty()) throw EstimationError("no trajectories");
  const int d = runs.front().box().dim();
  const auto grid = direction_grid(d, refinement);
  std::vector<std::vector<double>> radii;
  std::vector<ReplicaCloud> clouds;
  std::size_t biased = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    auto cloud = runs[i].infected_by(t);
    radii.push_back(radii_of(cloud, grid, t));
    clouds.push_back({i, std::move(cloud)});
    if (runs[i].touched_boundary()) ++biased;
  }
  auto est = aggregate(radii, grid, t, d);
  est.clouds = std::move(clouds);
  est.boundary_biased = biased;
  return est;
}

ShapeEstimate estimate_shape(const FieldConfig& cfg, const ShapeOptions& opt) {
  cfg.validate();
  if (!(opt.t > 0)) throw std::invalid_argument("t must be positive");
  struct Replica {
    bool alive = false;
    bool biased = false;
    std::vector<double> radii;
    std::vector<Site> cloud;
  };
  const Box box = Box::centered(cfg.d, opt.box_radius);
  const auto grid = direction_grid(cfg.d, opt.refinement);
  const auto runs = map_replicas(
      opt.replicas,
      [&](std::size_t r) {
        Replica rep;
        BoxGraph g(cfg.with_seed(replica_seed(cfg.seed, r)), box);
        if (!survives(g)) return rep;
        const auto traj = run_epidemic(g, opt.t);
        rep.alive = true;
        rep.biased = traj.touched_boundary();
        auto cloud = traj.infected_by(opt.t);
        rep.radii = radii_of(cloud, grid, opt.t);
        if (opt.keep_clouds) rep.cloud = std::move(cloud);
        return rep;
      },
      opt.par);
  std::vector<std::vector<double>> radii;
  std::vector<ReplicaCloud> clouds;
  std::size_t extinct = 0;
  std::size_t biased = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (!runs[r].alive) {
      ++extinct;
      continue;
    }
    radii.push_back(runs[r].radii);
    if (opt.keep_clouds) clouds.push_back({r, runs[r].cloud});
    if (runs[r].biased) ++biased;
  }
  if (radii.empty()) throw EstimationError("estimate_shape: every replica died out (subcritical or box too small)");
  auto est = aggregate(radii, grid, opt.t, cfg.d);
  est.clouds = std::move(clouds);
  est.excluded_extinct = extinct;
  est.boundary_biased = biased;
  return est;
}

namespace {

double interpolated_speed(const ShapeEstimate& shape, std::span<const double> u) {
  const auto table = shape.phi_table();
  const std::size_t k = std::min(shape.radii.size(), static_cast<std::size_t>(shape.d + 1));
  std::vector<std::pair<double, std::size_t>> near;
  near.reserve(shape.radii.size());
  for (std::size_t i = 0; i < shape.radii.size(); ++i) near.emplace_back(angle(u, shape.radii[i].direction), i);
  std::partial_sort(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(k), near.end());
  if (near.front().first < 1e-12) return table[near.front().second];
  double wsum = 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double w = 1.0 / near[j].first;
    wsum += w;
    acc += w * table[near[j].second];
  }
  return acc / wsum;
}

double grid_spacing(const ShapeEstimate& shape) {
  double spacing = 0.0;
  for (std::size_t i = 0; i < shape.radii.size(); ++i) {
    double nearest = kInfinity;
    for (std::size_t j = 0; j < shape.radii.size(); ++j) {
      if (i != j) nearest = std::min(nearest, angle(shape.radii[i].direction, shape.radii[j].direction));
    }
    spacing = std::max(spacing, nearest);
  }
  return spacing;
}

}  // namespace

double phi(const ShapeEstimate& shape, std::span<const double> x) {
  if (shape.radii.empty()) throw std::invalid_argument("phi: empty direction table");
  if (x.size() != static_cast<std::size_t>(shape.d)) throw std::invalid_argument("phi: wrong dimension");
  const double n = norm2(x);
  if (n == 0.0) return 0.0;
  Vec u(x.begin(), x.end());
  for (auto& c : u) c /= n;
  return n * interpolated_speed(shape, u);
}

double phi(const ShapeEstimate& shape, const Site& x) {
  const Vec v = to_vec(x);
  return phi(shape, v);
}

bool phi_extrapolates(const ShapeEstimate& shape, std::span<const double> x) {
  const double n = norm2(x);
  if (n == 0.0 || shape.radii.empty()) return false;
  Vec u(x.begin(), x.end());
  for (auto& c : u) c /= n;
  double nearest = kInfinity;
  for (const auto& r : shape.radii) nearest = std::min(nearest, angle(u, r.direction));
  return nearest > grid_spacing(shape);
}

double hausdorff_distance(const ShapeEstimate& a, const ShapeEstimate& b) {
  auto points = [](const ShapeEstimate& s) {
    std::vector<Vec> pts;
    for (const auto& r : s.radii) {
      Vec p = r.direction;
      for (auto& c : p) c *= r.radius;
      pts.push_back(std::move(p));
    }
    return pts;
  };
  const auto pa = points(a);
  const auto pb = points(b);
  if (pa.empty() || pb.empty()) throw std::invalid_argument("hausdorff_distance: empty shape");
  auto directed = [](const std::vector<Vec>& p, const std::vector<Vec>& q) {
    double worst = 0.0;
    for (const auto& x : p) {
      double best = kInfinity;
      for (const auto& y : q) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
        best = std::min(best, s);
      }
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(pa, pb), directed(pb, pa));
}

// ---- sandwich --------------------------------------------------------------------------

namespace {

struct BoxPhi {
  std::vector<double> phi;
  std::vector<char> wall;
};

BoxPhi phi_on_box(const ShapeEstimate& shape, const Box& box) {
  const auto sites = box_sites(box);
  BoxPhi out{std::vector<double>(sites.size()), std::vector<char>(sites.size())};
  for (std::size_t i = 0; i < sites.size(); ++i) {
    out.phi[i] = phi(shape, sites[i]);
    out.wall[i] = box.on_boundary(sites[i]);
  }
  return out;
}

struct SandwichCounts {
  std::size_t inner_total = 0, inner_bad = 0;
  std::size_t infected_total = 0, outer_bad = 0;
  std::size_t zeta_total = 0, zeta_inner = 0;
  bool on_wall = false;

  SandwichCounts& operator+=(const SandwichCounts& o) {
    inner_total += o.inner_total;
    inner_bad += o.inner_bad;
    infected_total += o.infected_total;
    outer_bad += o.outer_bad;
    zeta_total += o.zeta_total;
    zeta_inner += o.zeta_inner;
    return *this;
  }
};

SandwichCounts count_run(const EpidemicTrajectory& run, const BoxPhi& bp, double eps, double t) {
  const auto& inf = run.infection_times();
  const auto& rec = run.recovery_times();
  if (inf.size() != bp.phi.size()) throw std::invalid_argument("sandwich: runs must share one box");
  SandwichCounts c;
  for (std::size_t i = 0; i < inf.size(); ++i) {
    if (std::isinf(inf[i])) continue;  // outside C_o^o (within the box)
    const bool inner = bp.phi[i] <= (1.0 - eps) * t;
    const bool infected = inf[i] <= t;
    if (inner) {
      ++c.inner_total;
      if (!infected) ++c.inner_bad;
    }
    if (infected) {
      c.on_wall = c.on_wall || bp.wall[i];
      ++c.infected_total;
      if (bp.phi[i] > (1.0 + eps) * t) ++c.outer_bad;
      if (rec[i] > t) {
        ++c.zeta_total;
        if (inner) ++c.zeta_inner;
      }
    }
  }
  return c;
}

SandwichRow row_from(const std::vector<SandwichCounts>& per_run, double t) {
  SandwichRow row;
  row.t = t;
  row.replicas = per_run.size();
  SandwichCounts total;
  for (const auto& c : per_run) {
    total += c;
    if (c.on_wall) ++row.boundary_biased;
  }
  auto frac = [](std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); };
  row.inner_violation = frac(total.inner_bad, total.inner_total);
  row.outer_violation = frac(total.outer_bad, total.infected_total);
  row.annulus_fraction = frac(total.zeta_inner, total.zeta_total);
  return row;
}

void check_eps(double eps) {
  if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("eps must lie in (0, 1]");
}

}  // namespace

SandwichRow sandwich_row(std::span<const EpidemicTrajectory> runs, const ShapeEstimate& shape, double eps, double t) {
  check_eps(eps);
  if (runs.empty()) return row_from({}, t);
  const BoxPhi bp = phi_on_box(shape, runs.front().box());
  std::vector<SandwichCounts> per_run;
  for (const auto& run : runs) per_run.push_back(count_run(run, bp, eps, t));
  return row_from(per_run, t);
}

SandwichReport sandwich_check(const FieldConfig& cfg, const ShapeEstimate& shape, double eps,
                              std::span<const double> t_ladder, std::size_t replicas, std::int64_t box_radius,
                              Parallelism par) {
  cfg.validate();
  check_eps(eps);
  if (t_ladder.empty()) throw std::invalid_argument("sandwich_check needs a t ladder");
  SandwichReport rep;
  rep.eps = eps;
  constexpr std::size_t kSeedOffset = std::size_t{1} << 32;
  const Box box = Box::centered(cfg.d, box_radius);
  const BoxPhi bp = phi_on_box(shape, box);
  // per replica: one count set per t, or nothing when the epidemic dies out
  const auto runs = map_replicas(
      replicas,
      [&](std::size_t r) {
        std::vector<SandwichCounts> counts;
        BoxGraph g(cfg.with_seed(replica_seed(cfg.seed, kSeedOffset + r)), box);
        if (!survives(g)) return counts;
        const auto run = run_epidemic(g, kInfinity);
        for (double t : t_ladder) counts.push_back(count_run(run, bp, eps, t));
        return counts;
      },
      par);
  std::vector<const std::vector<SandwichCounts>*> alive;
  for (const auto& r : runs) {
    if (r.empty()) {
      ++rep.excluded_extinct;
    } else {
      alive.push_back(&r);
    }
  }
  for (std::size_t j = 0; j < t_ladder.size(); ++j) {
    std::vector<SandwichCounts> at_t;
    for (const auto* r : alive) at_t.push_back((*r)[j]);
    rep.rows.push_back(row_from(at_t, t_ladder[j]));
  }
  return rep;
}

// ---- linear growth ------------------------------------------------------------------------

LinearGrowthReport linear_growth_tail(const FieldConfig& cfg, std::span<const double> k_grid,
                                      std::span<const std::int64_t> radii, std::size_t replicas,
                                      std::int64_t box_radius, std::int64_t c_prime, Parallelism par) {
  cfg.validate();
  if (k_grid.empty() || radii.empty()) throw std::invalid_argument("linear_growth_tail needs K values and radii");
  for (auto r : radii) {
    if (r < 1 || r >= box_radius) throw std::invalid_argument("radius outside (0, box_radius)");
  }
  const Site origin = Site::origin(cfg.d);
  struct Replica {
    bool truncated = false;
    std::vector<double> tau;  // NaN where kappa(z) truncated
  };
  const auto runs = map_replicas(
      replicas,
      [&](std::size_t r) {
        Replica rep;
        BoxGraph g(cfg.with_seed(replica_seed(cfg.seed, r)), Box::centered(cfg.d, box_radius));
        const TildeC tc = tilde_c(g);
        try {
          const Neighborhood no = kappa(g, origin, tc, c_prime, false);
          const auto times = passage_times_from(g, indices_of(g, no.V));
          for (auto rad : radii) {
            try {
              const Neighborhood nz = kappa(g, Site::unit(cfg.d, 0, 1).scaled(rad), tc, c_prime, false);
              rep.tau.push_back(min_over(times, g, nz.V));
            } catch (const TruncationError&) {
              rep.tau.push_back(std::nan(""));
            }
          }
        } catch (const TruncationError&) {
          rep.truncated = true;
        }
        return rep;
      },
      par);

  LinearGrowthReport out;
  out.radii.assign(radii.begin(), radii.end());
  std::vector<std::vector<double>> samples(radii.size());
  for (const auto& rep : runs) {
    if (rep.truncated) {
      ++out.truncated;
      continue;
    }
    for (std::size_t j = 0; j < radii.size(); ++j) {
      if (!std::isnan(rep.tau[j])) samples[j].push_back(rep.tau[j]);
    }
  }
  out.samples_per_radius = samples.empty() ? 0 : samples.front().size();
  for (const auto& s : samples) out.samples_per_radius = std::min(out.samples_per_radius, s.size());

  for (double K : k_grid) {
    LinearGrowthRow row;
    row.K = K;
    for (std::size_t j = 0; j < radii.size(); ++j) {
      const auto& s = samples[j];
      if (s.empty()) continue;
      const double lim = K * static_cast<double>(radii[j]);
      const auto hits = std::count_if(s.begin(), s.end(), [&](double v) { return v > lim; });
      const double p = static_cast<double>(hits) / static_cast<double>(s.size());
      row.exceedance.push_back({static_cast<double>(radii[j]), p, std::sqrt(p * (1 - p) / static_cast<double>(s.size()))});
    }
    try {
      row.fit = tail_fit(row.exceedance, TailModel::exp_n_pow, cfg.d);
      row.accepted = row.fit->rate > 0 && row.fit->r2 >= 0.9;
    } catch (const EstimationError&) {
      row.fit.reset();
    }
    if (row.accepted && !out.smallest_accepted_K) out.smallest_accepted_K = K;
    out.rows.push_back(std::move(row));
  }
  if (out.smallest_accepted_K) {
    for (const auto& row : out.rows) {
      if (row.accepted) out.smallest_accepted_K = std::min(*out.smallest_accepted_K, row.K);
    }
  }
  return out;
}

// ---- moments -------------------------------------------------------------------------------

MomentReport neighborhood_moments(const FieldConfig& cfg, std::int64_t separation, int max_order,
                                  std::size_t replicas, std::int64_t box_radius, std::int64_t c_prime,
                                  Parallelism par) {
  cfg.validate();
  if (max_order < 1) throw std::invalid_argument("max_order must be >= 1");
  const Site origin = Site::origin(cfg.d);
  const Site far = Site::unit(cfg.d, 0, 1).scaled(separation);
  struct Sample {
    bool ok = false;
    double u = 0.0;
    double tau = 0.0;
  };
  const auto runs = map_replicas(
      replicas,
      [&](std::size_t r) {
        Sample s;
        BoxGraph g(cfg.with_seed(replica_seed(cfg.seed, r)), Box::centered(cfg.d, box_radius));
        const TildeC tc = tilde_c(g);
        try {
          const Neighborhood no = kappa(g, origin, tc, c_prime);
          const Neighborhood nf = kappa(g, far, tc, c_prime, false);
          s.u = u_weight(g, no);
          s.tau = tau_hat(g, no, nf);
          s.ok = !std::isinf(s.tau);
        } catch (const TruncationError&) {
        }
        return s;
      },
      par);
  MomentReport rep;
  std::vector<double> us, taus;
  for (const auto& s : runs) {
    if (!s.ok) {
      ++rep.truncated;
      continue;
    }
    us.push_back(s.u);
    taus.push_back(s.tau);
  }
  rep.samples = us.size();
  if (us.size() < 2) {
    if (rep.truncated > 0) throw TruncationError("neighborhood_moments: too few non-truncated samples; increase box_radius");
    throw EstimationError("neighborhood_moments: too few samples");
  }
  for (int k = 1; k <= max_order; ++k) {
    auto moment = [&](const std::vector<double>& xs) {
      std::vector<double> p(xs.size());
      std::transform(xs.begin(), xs.end(), p.begin(), [&](double v) { return std::pow(v, k); });
      MomentRow row;
      row.order = k;
      row.value = mean(p);
      row.ci = bootstrap_mean_ci(p, 0.95, 1000, cfg.seed + static_cast<std::uint64_t>(k));
      return row;
    };
    rep.u_moments.push_back(moment(us));
    rep.tau_hat_moments.push_back(moment(taus));
  }
  return rep;
}

}  // namespace epishape
