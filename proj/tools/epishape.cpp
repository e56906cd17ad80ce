// epishape: command-line front end. One process runs one experiment and
// writes its CSV/JSON artifacts under --out.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "epishape/config.hpp"
#include "epishape/epidemic.hpp"
#include "epishape/io.hpp"
#include "epishape/shape.hpp"
#include "epishape/stats.hpp"
#include "oracles/checks.hpp"

using namespace epishape;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flag name -> config key.
const std::map<std::string, std::string> kFlags = {
    {"d", "d"},           {"lambda", "lambda"},         {"recovery", "recovery"},   {"seed", "seed"},
    {"jobs", "jobs"},     {"out", "out"},               {"box-radius", "L"},        {"replicas", "replicas"},
    {"n", "n"},           {"n-ladder", "n_ladder"},     {"t", "t"},                 {"t-ladder", "t_ladder"},
    {"eps", "eps"},       {"tol", "tol"},               {"c-prime", "c_prime"},     {"refinement", "refinement"},
    {"z", "z"},           {"k-grid", "k_grid"},         {"separation", "separation"}, {"slab-k", "slab_k"},
    {"slab-extent", "slab_extent"},
};

struct Common {
  std::string config_path;
  std::map<std::string, std::string> values;
  bool clouds = false;

  void attach(CLI::App& app) {
    app.add_option("--config", config_path, "key = value config file; flags override it");
    for (const auto& [flag, key] : kFlags) {
      const std::string name = flag == "box-radius" ? "--box-radius,-L" : "--" + flag;
      app.add_option_function<std::string>(name, [this, key = key](const std::string& v) { values[key] = v; },
                                           "config key " + key);
    }
    app.add_flag("--clouds", clouds, "also write rescaled point clouds");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    for (const auto& [key, value] : values) set_config_value(cfg, key, value);
    if (clouds) cfg.clouds = true;
    cfg.validate();
    return cfg;
  }
};

std::string csv_header(const ExperimentConfig& cfg) { return provenance_header(cfg.seed, cfg.hash()); }

json provenance(const ExperimentConfig& cfg) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(cfg.hash()));
  return {{"tool", "epishape"}, {"version", std::string(kVersion)}, {"seed", cfg.seed}, {"config_hash", hash}};
}

void emit(const ExperimentConfig& cfg, const std::string& name, const std::string& body) {
  write_file_atomic(cfg.out / name, csv_header(cfg) + body);
}

void emit_json(const ExperimentConfig& cfg, const std::string& name, json doc) {
  json full = {{"provenance", provenance(cfg)}};
  for (auto& [k, v] : doc.items()) full[k] = v;
  write_file_atomic(cfg.out / name, full.dump(2) + "\n");
}

std::string join_real(const std::vector<double>& v, char sep = ' ') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += format_real(v[i]);
  }
  return s;
}

std::string site_text(const Site& x) {
  std::string s;
  for (int i = 0; i < x.d; ++i) {
    if (i) s += ' ';
    s += std::to_string(x.c[i]);
  }
  return s;
}

const char* name(Direction d) { return d == Direction::out ? "out" : "in"; }

json fit_json(const TailFit& f, const std::string& label) {
  return {{"label", label},          {"model", to_string(f.model)}, {"rate", f.rate},
          {"rate_se", f.rate_se},    {"r2", f.r2},                  {"support", {f.n_min, f.n_max}},
          {"points", f.points}};
}

std::string survival_rows(const std::vector<SurvivalCurve>& curves) {
  std::ostringstream os;
  os << "lambda,n,direction,p_hat,se,replicas\n";
  for (const auto& c : curves) {
    os << format_real(c.lambda) << ',' << c.n << ',' << name(c.direction) << ',' << format_real(c.p_hat) << ','
       << format_real(c.se) << ',' << c.replicas << '\n';
  }
  return os.str();
}

std::string tail_rows(const std::vector<TailPoint>& pts) {
  std::ostringstream os;
  os << "n,p,se\n";
  for (const auto& p : pts) os << format_real(p.n) << ',' << format_real(p.p) << ',' << format_real(p.se) << '\n';
  return os.str();
}

// ---- subcommands -----------------------------------------------------------------------

int cmd_epidemic(const ExperimentConfig& cfg) {
  const auto run = run_epidemic(cfg.field(), Box::centered(cfg.d, cfg.box_radius), cfg.t);
  std::ostringstream os;
  run.write_csv(os);
  emit(cfg, "epidemic.csv", os.str());
  const auto snap = run.snapshot(cfg.t);
  std::printf("epidemic: t=%s infected=%zu immune=%zu ever=%zu%s\n", format_real(cfg.t).c_str(), snap.zeta.size(),
              snap.xi.size(), run.ever_infected(), run.touched_boundary() ? " (reached the box wall: biased)" : "");
  return 0;
}

int cmd_shape(const ExperimentConfig& cfg, bool sandwich) {
  ShapeOptions opt;
  opt.t = cfg.t;
  opt.replicas = cfg.replicas;
  opt.box_radius = cfg.box_radius;
  opt.refinement = cfg.refinement;
  opt.keep_clouds = cfg.clouds;
  opt.par.jobs = cfg.jobs;
  const auto est = estimate_shape(cfg.field(), opt);
  std::ostringstream os;
  os << "direction,radius,ci_lo,ci_hi\n";
  for (const auto& r : est.radii) {
    os << join_real(r.direction) << ',' << format_real(r.radius) << ',' << format_real(r.ci_lo) << ','
       << format_real(r.ci_hi) << '\n';
  }
  emit(cfg, "radii.csv", os.str());
  if (cfg.clouds) {
    std::ostringstream cs;
    cs << "replica";
    for (int i = 1; i <= cfg.d; ++i) cs << ",x_" << i;
    cs << '\n';
    for (const auto& c : est.clouds) {
      for (const auto& x : c.sites) {
        cs << c.replica;
        for (int i = 0; i < cfg.d; ++i) cs << ',' << format_real(static_cast<double>(x.c[i]) / est.t);
        cs << '\n';
      }
    }
    emit(cfg, "clouds.csv", cs.str());
  }
  std::printf("shape: t=%s directions=%zu included=%zu extinct=%zu biased=%zu\n", format_real(est.t).c_str(),
              est.radii.size(), est.included, est.excluded_extinct, est.boundary_biased);
  if (sandwich) {
    const auto rep =
        sandwich_check(cfg.field(), est, cfg.eps, cfg.t_ladder, cfg.replicas, cfg.box_radius, Parallelism{cfg.jobs});
    std::ostringstream ss;
    ss << "t,eps,inner_violation,outer_violation,annulus_fraction,replicas,boundary_biased\n";
    for (const auto& r : rep.rows) {
      ss << format_real(r.t) << ',' << format_real(cfg.eps) << ',' << format_real(r.inner_violation) << ','
         << format_real(r.outer_violation) << ',' << format_real(r.annulus_fraction) << ',' << r.replicas << ','
         << r.boundary_biased << '\n';
    }
    emit(cfg, "sandwich.csv", ss.str());
    const auto& last = rep.rows.back();
    std::printf("sandwich: eps=%s t=%s inner=%s outer=%s annulus=%s\n", format_real(cfg.eps).c_str(),
                format_real(last.t).c_str(), format_real(last.inner_violation).c_str(),
                format_real(last.outer_violation).c_str(), format_real(last.annulus_fraction).c_str());
  }
  return 0;
}

int cmd_radial(const ExperimentConfig& cfg) {
  RadialOptions opt;
  opt.z = cfg.z_site();
  opt.n_values = cfg.n_ladder;
  opt.replicas = cfg.replicas;
  opt.box_radius = cfg.box_radius;
  opt.c_prime = cfg.c_prime;
  opt.par.jobs = cfg.jobs;
  const auto est = radial_limit(cfg.field(), opt);
  std::ostringstream os;
  os << "z,n,replica,ratio\n";
  for (std::size_t i = 0; i < est.ratios.size(); ++i) {
    for (std::size_t j = 0; j < est.n_values.size(); ++j) {
      os << site_text(est.z) << ',' << est.n_values[j] << ',' << est.replica_ids[i] << ','
         << format_real(est.ratios[i][j]) << '\n';
    }
  }
  emit(cfg, "radial.csv", os.str());
  json per_n = json::array();
  for (std::size_t j = 0; j < est.n_values.size(); ++j) {
    per_n.push_back({{"n", est.n_values[j]}, {"mean", est.mean_ratio[j]}, {"ci", {est.ci[j].lo, est.ci[j].hi}}});
  }
  emit_json(cfg, "radial.json",
            {{"z", site_text(est.z)},
             {"mu_hat", est.mu_hat},
             {"ci", {est.mu_ci.lo, est.mu_ci.hi}},
             {"per_n", per_n},
             {"included", est.ratios.size()},
             {"excluded_outside_cluster", est.excluded_outside_cluster},
             {"excluded_truncated", est.excluded_truncated}});
  std::printf("radial: z=(%s) mu_hat=%s ci=[%s, %s] included=%zu excluded=%zu+%zu\n", site_text(est.z).c_str(),
              format_real(est.mu_hat).c_str(), format_real(est.mu_ci.lo).c_str(), format_real(est.mu_ci.hi).c_str(),
              est.ratios.size(), est.excluded_outside_cluster, est.excluded_truncated);
  return 0;
}

json bracket_json(const LambdaBracket& b) {
  return {{"lo", b.lo}, {"hi", b.hi}, {"p_lo", b.p_lo}, {"p_hi", b.p_hi}};
}

int cmd_lambda_c(const ExperimentConfig& cfg) {
  const auto est = estimate_lambda_c(cfg.field(), cfg.n, cfg.tol, cfg.replicas, Parallelism{cfg.jobs});
  emit(cfg, "survival.csv", survival_rows(est.evaluations));
  emit_json(cfg, "lambda_c.json",
            {{"n", est.n},
             {"tol", est.tol},
             {"replicas", est.replicas},
             {"out", bracket_json(est.out)},
             {"in", bracket_json(est.in)},
             {"overlap", est.overlap()},
             {"midpoint", est.midpoint()}});
  std::printf("lambda-c: n=%lld out=[%s, %s] in=[%s, %s] overlap=%s\n", static_cast<long long>(est.n),
              format_real(est.out.lo).c_str(), format_real(est.out.hi).c_str(), format_real(est.in.lo).c_str(),
              format_real(est.in.hi).c_str(), est.overlap() ? "yes" : "no");
  return 0;
}

int cmd_tails(const ExperimentConfig& cfg, const std::string& kind, bool sensitivity) {
  const FieldConfig field = cfg.field();
  const Parallelism par{cfg.jobs};
  if (kind == "decay") {
    std::vector<SurvivalCurve> curves;
    json fits = json::array();
    for (Direction dir : {Direction::out, Direction::in}) {
      std::vector<TailPoint> pts;
      for (auto n : cfg.n_ladder) {
        curves.push_back(survival_probability(field, n, dir, cfg.replicas, par));
        pts.push_back({static_cast<double>(n), curves.back().p_hat, curves.back().se});
      }
      try {
        fits.push_back(fit_json(tail_fit(pts, TailModel::exp_n, 1, true), name(dir)));
      } catch (const EstimationError& e) {
        fits.push_back({{"label", name(dir)}, {"error", e.what()}});
      }
    }
    emit(cfg, "survival.csv", survival_rows(curves));
    emit_json(cfg, "fits.json", {{"fits", fits}});
    std::printf("tails decay: %s\n", fits.dump().c_str());
  } else if (kind == "kappa") {
    const auto kt = kappa_tail(field, cfg.box_radius, cfg.c_prime, cfg.replicas, par);
    emit(cfg, "kappa_tail.csv", tail_rows(kt.kappa_survival));
    json fits = json::array();
    try {
      fits.push_back(fit_json(tail_fit(kt.kappa_survival, TailModel::exp_n_pow, cfg.d), "kappa"));
    } catch (const EstimationError& e) {
      fits.push_back({{"label", "kappa"}, {"error", e.what()}});
    }
    if (sensitivity) {
      // Same replicas in a box twice as large: the finite-volume C~ proxy moves outwards.
      const auto wide = kappa_tail(field, 2 * cfg.box_radius, cfg.c_prime, cfg.replicas, par);
      std::ostringstream os;
      os << "L,n,p,se\n";
      for (const auto* t : {&kt, &wide}) {
        for (const auto& p : t->kappa_survival)
          os << t->box_radius << ',' << format_real(p.n) << ',' << format_real(p.p) << ',' << format_real(p.se) << '\n';
      }
      emit(cfg, "kappa_sensitivity.csv", os.str());
      for (const auto* t : {&kt, &wide}) {
        std::printf("kappa L=%lld truncated=%zu P(kappa>=n):", static_cast<long long>(t->box_radius), t->truncated);
        for (const auto& p : t->kappa_survival) std::printf(" %s", format_real(p.p).c_str());
        std::printf("\n");
      }
    }
    emit_json(cfg, "fits.json", {{"fits", fits}, {"truncated", kt.truncated}, {"n_max", kt.n_max}});
    std::printf("tails kappa: truncated=%zu %s\n", kt.truncated, fits.dump().c_str());
  } else if (kind == "growth") {
    const auto rep = linear_growth_tail(field, cfg.k_grid, cfg.n_ladder, cfg.replicas, cfg.box_radius, cfg.c_prime, par);
    std::ostringstream os;
    os << "K,n,p,se\n";
    json fits = json::array();
    for (const auto& row : rep.rows) {
      for (const auto& p : row.exceedance) {
        os << format_real(row.K) << ',' << format_real(p.n) << ',' << format_real(p.p) << ',' << format_real(p.se)
           << '\n';
      }
      if (row.fit) fits.push_back(fit_json(*row.fit, "K=" + format_real(row.K)));
    }
    emit(cfg, "growth.csv", os.str());
    json smallest = rep.smallest_accepted_K ? json(*rep.smallest_accepted_K) : json(nullptr);
    emit_json(cfg, "fits.json", {{"fits", fits}, {"smallest_accepted_K", smallest}, {"truncated", rep.truncated}});
    std::printf("tails growth: smallest accepted K=%s\n", smallest.dump().c_str());
  } else if (kind == "moments") {
    const auto rep =
        neighborhood_moments(field, cfg.separation, cfg.d + 2, cfg.replicas, cfg.box_radius, cfg.c_prime, par);
    std::ostringstream os;
    os << "quantity,order,value,ci_lo,ci_hi\n";
    for (const auto* rows : {&rep.u_moments, &rep.tau_hat_moments}) {
      for (const auto& m : *rows) {
        os << (rows == &rep.u_moments ? "u" : "tau_hat") << ',' << m.order << ',' << format_real(m.value) << ','
           << format_real(m.ci.lo) << ',' << format_real(m.ci.hi) << '\n';
      }
    }
    emit(cfg, "moments.csv", os.str());
    std::printf("tails moments: samples=%zu truncated=%zu\n", rep.samples, rep.truncated);
  } else if (kind == "chemical") {
    const double c = 2.0;
    const auto pts = conditional_chemical_tail(field, cfg.separation, c, cfg.n_ladder, cfg.box_radius, cfg.replicas, par);
    emit(cfg, "chemical_tail.csv", tail_rows(pts));
    std::printf("tails chemical: points=%zu\n", pts.size());
  } else {
    throw UsageError("unknown --kind '" + kind + "' (decay, kappa, growth, moments, chemical)");
  }
  return 0;
}

int cmd_fkg(const ExperimentConfig& cfg, const std::string& u, const std::string& v) {
  if (u.empty() || v.empty()) throw UsageError("fkg needs --event-u and --event-v");
  const auto eu = MonotoneEvent::parse(u, cfg.d);
  const auto ev = MonotoneEvent::parse(v, cfg.d);
  const auto rep = fkg_check(cfg.field(), eu, ev, cfg.replicas, Parallelism{cfg.jobs});
  emit_json(cfg, "fkg.json",
            {{"event_u", eu.to_string()},
             {"event_v", ev.to_string()},
             {"mean_u", rep.mean_u},
             {"mean_v", rep.mean_v},
             {"mean_uv", rep.mean_uv},
             {"cov", rep.cov},
             {"se", rep.se},
             {"replicas", rep.replicas},
             {"consistent", rep.consistent()}});
  std::printf("fkg: cov=%s se=%s consistent=%s\n", format_real(rep.cov).c_str(), format_real(rep.se).c_str(),
              rep.consistent() ? "yes" : "no");
  return 0;
}

int cmd_slab(const ExperimentConfig& cfg) {
  const auto rep = slab_percolation_probe(cfg.field(), cfg.slab_k, cfg.slab_extent, cfg.replicas, Parallelism{cfg.jobs});
  std::ostringstream os;
  os << "height,frequency\n";
  for (std::size_t i = 0; i < rep.heights.size(); ++i) os << rep.heights[i] << ',' << format_real(rep.frequency[i]) << '\n';
  emit(cfg, "slab.csv", os.str());
  std::printf("slab: k=%lld M=%lld min frequency=%s\n", static_cast<long long>(rep.k),
              static_cast<long long>(rep.extent), format_real(rep.min_frequency).c_str());
  return 0;
}

int cmd_verify(bool quick, std::uint64_t seed) {
  const std::size_t scale = quick ? 1 : 5;
  struct Item {
    const char* name;
    checks::Outcome outcome;
  };
  std::vector<Item> items;
  auto run = [&](const char* label, auto&& fn) {
    items.push_back({label, fn()});
    const auto& o = items.back().outcome;
    std::printf("%-34s %s  cases=%zu skipped=%zu%s%s\n", label, o.ok() ? "PASS" : "FAIL", o.cases, o.skipped,
                o.ok() ? "" : "  first: ", o.ok() ? "" : o.first_failure.c_str());
    std::fflush(stdout);
  };
  run("event-driven vs dijkstra (d=2)", [&] { return checks::oracle_equivalence(2, 20 * scale, 4, seed); });
  run("event-driven vs dijkstra (d=3)", [&] { return checks::oracle_equivalence(3, 20 * scale, 4, seed); });
  run("small-box brute force (d=2)", [&] { return checks::small_box_oracles(2, 3, 10 * scale, seed); });
  run("small-box brute force (d=3)", [&] { return checks::small_box_oracles(3, 2, 4 * scale, seed); });
  run("coupling monotonicity", [&] { return checks::coupling_monotonicity(2000 * scale, 4 * scale, seed); });
  run("tau_hat subadditivity", [&] { return checks::subadditivity(50 * scale, seed); });
  run("tau_hat <= tau <= u + tau_hat + u", [&] { return checks::passage_sandwich(50 * scale, seed); });
  run("growth nesting", [&] { return checks::growth_nesting(4 * scale, seed); });
  run("serial vs parallel kernels", [&] { return checks::serial_parallel_agreement(4 * scale, seed); });
  const bool ok = std::all_of(items.begin(), items.end(), [](const Item& i) { return i.outcome.ok(); });
  std::printf("verify: %s\n", ok ? "all invariants hold" : "violations found");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo experiments for the spatial SIR epidemic and its oriented percolation"};
  app.require_subcommand(1);
  std::map<std::string, Common> common;
  auto sub = [&](const char* n, const char* help) {
    auto* s = app.add_subcommand(n, help);
    common[n].attach(*s);
    return s;
  };
  auto* s_epidemic = sub("epidemic", "one epidemic up to --t in the box of radius L");
  auto* s_shape = sub("shape", "directional radii of the rescaled infected set at --t");
  bool sandwich = false;
  s_shape->add_flag("--sandwich", sandwich, "also check the shape inclusions along --t-ladder");
  auto* s_radial = sub("radial", "tau_hat(o, n z) / n along --n-ladder");
  auto* s_lambda = sub("lambda-c", "bisection brackets for the critical rate, out and in");
  auto* s_tails = sub("tails", "tail estimates and fits");
  std::string kind = "decay";
  s_tails->add_option("--kind", kind, "decay, kappa, growth, moments or chemical");
  bool sensitivity = false;
  s_tails->add_flag("--sensitivity", sensitivity, "kappa: repeat at 2L and write kappa_sensitivity.csv");
  auto* s_fkg = sub("fkg", "covariance of two increasing events");
  std::string event_u, event_v;
  s_fkg->add_option("--event-u", event_u, "bonds 'x>y' joined by & (and) and | (or)");
  s_fkg->add_option("--event-v", event_v, "second event");
  auto* s_slab = sub("slab", "lateral percolation inside a slab");
  auto* s_verify = app.add_subcommand("verify", "exact invariants against the reference implementations");
  bool quick = false;
  std::uint64_t verify_seed = 1;
  s_verify->add_flag("--quick", quick, "smaller case counts");
  s_verify->add_option("--seed", verify_seed, "base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    if (chosen == s_verify) return cmd_verify(quick, verify_seed);
    const ExperimentConfig cfg = common.at(chosen->get_name()).resolve();
    if (chosen == s_epidemic) return cmd_epidemic(cfg);
    if (chosen == s_shape) return cmd_shape(cfg, sandwich);
    if (chosen == s_radial) return cmd_radial(cfg);
    if (chosen == s_lambda) return cmd_lambda_c(cfg);
    if (chosen == s_tails) return cmd_tails(cfg, kind, sensitivity);
    if (chosen == s_fkg) return cmd_fkg(cfg, event_u, event_v);
    if (chosen == s_slab) return cmd_slab(cfg);
  } catch (const TruncationError& e) {
    std::fprintf(stderr, "error: %s\nhint: increase box_radius (-L)\n", e.what());
    return 3;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n\n%s", e.what(), chosen->help().c_str());
    return 2;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n\n%s", e.what(), chosen->help().c_str());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n\n%s", e.what(), chosen->help().c_str());
    return 2;
  } catch (const EstimationError& e) {
    std::fprintf(stderr, "estimation failed: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
