#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "epishape/field.hpp"
#include "epishape/lattice.hpp"

namespace epishape {

/// Everything an experiment reads. The recovery law has no default.
struct ExperimentConfig {
  int d = 3;
  double lambda = 1.0;
  std::optional<RecoveryDist> recovery;
  std::uint64_t seed = 1;

  std::int64_t box_radius = 16;  // L
  std::size_t replicas = 100;
  int jobs = 0;
  std::filesystem::path out = ".";

  std::int64_t n = 8;
  std::vector<std::int64_t> n_ladder{2, 3, 4, 5, 6, 7, 8};
  double t = 8.0;
  std::vector<double> t_ladder{4.0, 6.0, 8.0};
  double eps = 0.3;
  double tol = 0.05;
  std::int64_t c_prime = 8;
  int refinement = 2;
  std::vector<std::int64_t> z;  // empty = e_1
  std::vector<double> k_grid{1.0, 2.0, 3.0, 4.0};
  std::int64_t separation = 4;
  std::int64_t slab_k = 4;
  std::int64_t slab_extent = 32;
  bool clouds = false;

  /// Field part; throws ConfigError when the recovery law is missing.
  FieldConfig field() const;
  /// z as a site of dimension d.
  Site z_site() const;
  /// Checks every value; throws ConfigError naming the key.
  void validate() const;
  /// "key=value" lines in a fixed order, the input of config_hash.
  std::string canonical() const;
  std::uint64_t hash() const;
};

/// Names accepted in files and as --key flags.
const std::vector<std::string>& config_keys();

/// Sets one key from its textual value; throws ConfigError with the key on a
/// type mismatch or an unknown key.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Flat key = value file; keys may sit at top level or under [field] and
/// [experiment] sections. Strings may be quoted. Unknown keys are reported
/// together.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<string>");

}  // namespace epishape
