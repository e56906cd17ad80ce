#pragma once

// Exact invariants checked against the oracles. Shared by `epishape verify`
// and the acceptance suite.

#include <cstdint>
#include <string>

namespace epishape::checks {

struct Outcome {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::size_t skipped = 0;
  std::string first_failure;

  bool ok() const { return failures == 0 && cases > 0; }
  void fail(std::string what) {
    if (failures++ == 0) first_failure = std::move(what);
  }
};

/// Dijkstra infection times vs the event-driven epidemic, bitwise, on B(o, radius);
/// also point passage times vs Bellman-Ford relaxation.
Outcome oracle_equivalence(int d, std::size_t seeds, std::int64_t radius = 4, std::uint64_t base_seed = 1);

/// Clusters, chemical distances, C~, roots and kappa vs brute force on small boxes.
Outcome small_box_oracles(int d, std::int64_t radius, std::size_t seeds, std::uint64_t base_seed = 1);

/// Open bonds and infection times monotone in lambda under a shared seed.
Outcome coupling_monotonicity(std::size_t bonds, std::size_t trajectories, std::uint64_t base_seed = 1);

/// tau_hat subadditivity over triples and tau_hat <= tau <= u(x) + tau_hat + u(y)
/// over pairs, until `samples` non-truncated cases of each kind are seen.
Outcome subadditivity(std::size_t samples, std::uint64_t base_seed = 1);
Outcome passage_sandwich(std::size_t samples, std::uint64_t base_seed = 1);

/// Infected sets nested in t; parallel and serial materialisation and replica maps agree.
Outcome growth_nesting(std::size_t seeds, std::uint64_t base_seed = 1);
Outcome serial_parallel_agreement(std::size_t seeds, std::uint64_t base_seed = 1);

/// Relative slack for comparing sums of passage times accumulated in different orders.
inline constexpr double kSumSlack = 1e-12;

}  // namespace epishape::checks
