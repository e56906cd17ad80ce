#pragma once

// Slow, independent reference computations for small boxes. They use only the
// stateless field functions and Site-keyed containers, never BoxGraph.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "epishape/field.hpp"
#include "epishape/lattice.hpp"

namespace epishape::oracle {

using SiteSet = std::set<Site>;

/// Infection times of an SIR epidemic from the origin in an absorbing box,
/// simulated event by event: infections, transmission germs, recoveries.
/// Never-infected sites (or infected after the horizon) are absent.
std::map<Site, double> event_epidemic(const FieldConfig& cfg, const Box& box, double horizon);

/// Shortest open-path hop counts from x, with every path site except the last
/// in `allowed` (reversed: paths into x, every site but x in `allowed`).
/// Layer-by-layer path extension.
std::map<Site, std::int64_t> hop_layers(const FieldConfig& cfg, const Box& box, const Site& x,
                                        const SiteSet& allowed, bool reversed = false);

/// Bellman-Ford passage times from x over the box, relaxing path sums in path order.
std::map<Site, double> relaxed_passage_times(const FieldConfig& cfg, const Box& box, const Site& x);

/// Per-site check of the two-way boundary connection defining the C~ proxy.
SiteSet tilde_c_by_site(const FieldConfig& cfg, const Box& box);

/// Sites reachable from x (or reaching x) by open paths in the box whose sites all avoid tc.
SiteSet roots_by_paths(const FieldConfig& cfg, const Box& box, const Site& x, const SiteSet& tc, bool reversed);

/// Smallest l meeting the three conditions, checked from the definitions;
/// nullopt when none up to lmax.
std::optional<std::int64_t> kappa_by_definition(const FieldConfig& cfg, const Box& box, const Site& x,
                                                const SiteSet& tc, std::int64_t c_prime);

}  // namespace epishape::oracle
