#pragma once

#include "iptamc/ipta.hpp"

#include <cstddef>
#include <map>
#include <vector>

namespace iptamc {

/// Distinct greedy extreme distributions of `d`, one per ordering of its support, in
/// order of first appearance (orderings enumerated lexicographically). Exact.
/// Throws Error(SupportTooLarge) when the support exceeds `max_support`.
std::vector<std::vector<Rational>> extreme_distributions(const IntervalDistribution<EdgeOutcome>& d,
                                                         std::size_t max_support = 8);

/// PTA encoding: every interval edge is replaced by one point-distribution edge per
/// distinct extreme distribution; zero-probability branches are dropped.
Ipta pta_star(const Ipta& m, std::size_t max_support = 8);

/// Chosen probability per outcome for selected edges (by edge index).
using EdgeChoice = std::map<std::size_t, std::map<EdgeOutcome, Rational>>;

/// Replaces each edge's distribution by the chosen one. Point-interval edges may be
/// omitted. Throws Error(NonConformingChoice | NonNormalizedChoice).
Ipta sample(const Ipta& m, const EdgeChoice& choice);

/// For two-outcome interval edges: `y` on the first outcome, `1 - y` on the second.
/// Throws Error(UnsupportedArity) if an interval edge has another support size.
Ipta scalar_sample(const Ipta& m, const Rational& y);

/// Per-edge choice that puts the midpoint of the first outcome's interval on it and the
/// remainder on the second (two-outcome interval edges only).
Rational default_sample_value(const Ipta& m);

} // namespace iptamc
