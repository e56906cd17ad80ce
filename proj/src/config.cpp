#include "epishape/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "epishape/io.hpp"

namespace epishape {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  s = s.substr(b, e - b + 1);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) s = s.substr(1, s.size() - 2);
  return s;
}

[[noreturn]] void mismatch(const std::string& key, const char* want, const std::string& got) {
  throw ConfigError("config key '" + key + "': expected " + want + ", got '" + got + "'");
}

template <class T>
T parse_number(const std::string& key, const std::string& text, const char* want) {
  T v{};
  const char* b = text.data();
  const char* e = b + text.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || text.empty()) mismatch(key, want, text);
  return v;
}

std::int64_t as_int(const std::string& key, const std::string& v) { return parse_number<std::int64_t>(key, v, "an integer"); }
double as_real(const std::string& key, const std::string& v) { return parse_number<double>(key, v, "a number"); }

bool as_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  mismatch(key, "true or false", v);
}

template <class T, class F>
std::vector<T> as_list(const std::string& key, const std::string& v, F&& one) {
  std::vector<T> out;
  std::string item;
  std::stringstream ss(v);
  while (std::getline(ss, item, ',')) out.push_back(one(key, trim(item)));
  if (out.empty()) mismatch(key, "a comma-separated list", v);
  return out;
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    if constexpr (std::is_floating_point_v<T>) {
      s += format_real(xs[i]);
    } else {
      s += std::to_string(xs[i]);
    }
  }
  return s;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"d", [](auto& c, auto& k, auto& v) { c.d = static_cast<int>(as_int(k, v)); }},
      {"lambda", [](auto& c, auto& k, auto& v) { c.lambda = as_real(k, v); }},
      {"recovery", [](auto& c, auto&, auto& v) { c.recovery = RecoveryDist::parse(v); }},
      {"seed", [](auto& c, auto& k, auto& v) { c.seed = parse_number<std::uint64_t>(k, v, "a non-negative integer"); }},
      {"L", [](auto& c, auto& k, auto& v) { c.box_radius = as_int(k, v); }},
      {"box_radius", [](auto& c, auto& k, auto& v) { c.box_radius = as_int(k, v); }},
      {"replicas", [](auto& c, auto& k, auto& v) { c.replicas = parse_number<std::size_t>(k, v, "a non-negative integer"); }},
      {"jobs", [](auto& c, auto& k, auto& v) { c.jobs = static_cast<int>(as_int(k, v)); }},
      {"out", [](auto& c, auto&, auto& v) { c.out = v; }},
      {"n", [](auto& c, auto& k, auto& v) { c.n = as_int(k, v); }},
      {"n_ladder", [](auto& c, auto& k, auto& v) { c.n_ladder = as_list<std::int64_t>(k, v, as_int); }},
      {"t", [](auto& c, auto& k, auto& v) { c.t = as_real(k, v); }},
      {"t_ladder", [](auto& c, auto& k, auto& v) { c.t_ladder = as_list<double>(k, v, as_real); }},
      {"eps", [](auto& c, auto& k, auto& v) { c.eps = as_real(k, v); }},
      {"tol", [](auto& c, auto& k, auto& v) { c.tol = as_real(k, v); }},
      {"c_prime", [](auto& c, auto& k, auto& v) { c.c_prime = as_int(k, v); }},
      {"refinement", [](auto& c, auto& k, auto& v) { c.refinement = static_cast<int>(as_int(k, v)); }},
      {"z", [](auto& c, auto& k, auto& v) { c.z = as_list<std::int64_t>(k, v, as_int); }},
      {"k_grid", [](auto& c, auto& k, auto& v) { c.k_grid = as_list<double>(k, v, as_real); }},
      {"separation", [](auto& c, auto& k, auto& v) { c.separation = as_int(k, v); }},
      {"slab_k", [](auto& c, auto& k, auto& v) { c.slab_k = as_int(k, v); }},
      {"slab_extent", [](auto& c, auto& k, auto& v) { c.slab_extent = as_int(k, v); }},
      {"clouds", [](auto& c, auto& k, auto& v) { c.clouds = as_bool(k, v); }},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, fn] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const auto leaf = key.substr(key.rfind('.') == std::string::npos ? 0 : key.rfind('.') + 1);
  const auto it = setters().find(leaf);
  if (it == setters().end()) throw ConfigError("unknown config key: " + key);
  try {
    it->second(cfg, key, trim(value));
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.find("config key") == 0) throw;
    throw ConfigError("config key '" + key + "': " + what);
  }
}

FieldConfig ExperimentConfig::field() const {
  if (!recovery) throw ConfigError("recovery is required");
  FieldConfig f;
  f.d = d;
  f.lambda = lambda;
  f.recovery = *recovery;
  f.seed = seed;
  f.validate();
  return f;
}

Site ExperimentConfig::z_site() const {
  check_dimension(d);
  if (z.empty()) return Site::unit(d, 0, 1);
  if (z.size() != static_cast<std::size_t>(d)) throw ConfigError("config key 'z': expected " + std::to_string(d) + " coordinates");
  Site s = Site::origin(d);
  for (int i = 0; i < d; ++i) s.c[i] = z[static_cast<std::size_t>(i)];
  return s;
}

void ExperimentConfig::validate() const {
  auto need = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(std::string("config key '") + key + "': " + what);
  };
  try {
    check_dimension(d);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config key 'd': ") + e.what());
  }
  field();
  z_site();
  need(box_radius >= 1 && box_radius < (std::int64_t{1} << 20), "L", "must lie in [1, 2^20)");
  need(jobs >= 0, "jobs", "must be >= 0");
  need(n >= 1, "n", "must be >= 1");
  need(std::all_of(n_ladder.begin(), n_ladder.end(), [](auto v) { return v >= 1; }), "n_ladder", "entries must be >= 1");
  need(std::is_sorted(n_ladder.begin(), n_ladder.end()), "n_ladder", "must be increasing");
  need(t > 0, "t", "must be > 0");
  need(std::all_of(t_ladder.begin(), t_ladder.end(), [](auto v) { return v > 0; }), "t_ladder", "entries must be > 0");
  need(eps > 0 && eps <= 1, "eps", "must lie in (0, 1]");
  need(tol > 0, "tol", "must be > 0");
  need(c_prime >= 2, "c_prime", "must be >= 2");
  need(refinement >= 1, "refinement", "must be >= 1");
  need(separation >= 1, "separation", "must be >= 1");
  need(slab_k >= 1, "slab_k", "must be >= 1");
  need(slab_extent >= 2, "slab_extent", "must be >= 2");
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "d=" << d << '\n';
  os << "lambda=" << format_real(lambda) << '\n';
  os << "recovery=" << (recovery ? recovery->to_string() : "") << '\n';
  os << "seed=" << seed << '\n';
  os << "L=" << box_radius << '\n';
  os << "replicas=" << replicas << '\n';
  os << "n=" << n << '\n';
  os << "n_ladder=" << join(n_ladder) << '\n';
  os << "t=" << format_real(t) << '\n';
  os << "t_ladder=" << join(t_ladder) << '\n';
  os << "eps=" << format_real(eps) << '\n';
  os << "tol=" << format_real(tol) << '\n';
  os << "c_prime=" << c_prime << '\n';
  os << "refinement=" << refinement << '\n';
  os << "z=" << join(z) << '\n';
  os << "k_grid=" << join(k_grid) << '\n';
  os << "separation=" << separation << '\n';
  os << "slab_k=" << slab_k << '\n';
  os << "slab_extent=" << slab_extent << '\n';
  os << "clouds=" << (clouds ? "true" : "false") << '\n';
  return os.str();
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a(canonical()); }

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  ExperimentConfig cfg;
  std::vector<std::string> unknown;
  auto visit = [&](const std::string& path, const std::string& value) {
    const auto leaf = path.substr(path.rfind('.') == std::string::npos ? 0 : path.rfind('.') + 1);
    if (!setters().count(leaf)) {
      unknown.push_back(path);
      return;
    }
    set_config_value(cfg, path, value);
  };
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      visit(name, node.data());
      continue;
    }
    if (name != "field" && name != "experiment") {
      unknown.push_back("[" + name + "]");
      continue;
    }
    for (const auto& [k, leaf] : node) visit(name + "." + k, leaf.data());
  }
  if (!unknown.empty()) {
    std::string msg = origin + ": unknown config keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), path.string());
}

}  // namespace epishape
