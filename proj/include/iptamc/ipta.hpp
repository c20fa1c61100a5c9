#pragma once

#include "iptamc/clock.hpp"
#include "iptamc/interval_distribution.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace iptamc {

using LocationId = std::uint32_t;

/// Target of a probabilistic edge branch: the clocks it resets and the location it enters.
struct EdgeOutcome {
    ClockSet resets = 0;
    LocationId target = 0;

    friend bool operator==(const EdgeOutcome&, const EdgeOutcome&) = default;
    friend auto operator<=>(const EdgeOutcome&, const EdgeOutcome&) = default;
};

struct Variable {
    std::string name;
    std::int64_t low = 0;
    std::int64_t high = 0;
    std::int64_t init = 0;
};

struct Edge {
    LocationId source = 0;
    ClockConstraint guard;
    std::string action;
    IntervalDistribution<EdgeOutcome> distribution;
    /// Human-readable provenance, e.g. "Server command 1 (line 14)".
    std::string origin;
};

/// Interval probabilistic timed automaton over explicit locations.
///
/// Each location is a valuation of `variables`; composition concatenates valuations.
struct Ipta {
    std::vector<Variable> variables;
    std::vector<std::vector<std::int64_t>> locations;
    std::vector<LocationId> initial;
    std::set<std::string> actions;
    std::vector<std::string> clocks;
    std::vector<ClockConstraint> invariants;
    std::vector<Edge> edges;
    /// Atomic propositions per location, sorted.
    std::vector<std::vector<std::string>> labels;
    /// Every declared label name, including labels that hold nowhere.
    std::set<std::string> label_names;

    std::size_t location_count() const { return locations.size(); }
    std::string describe_location(LocationId l) const;
    std::optional<ClockId> find_clock(std::string_view name) const;
    std::optional<std::size_t> find_variable(std::string_view name) const;
    bool has_label(LocationId l, std::string_view name) const;
};

/// Predicate over states: per location, a disjunction of clock constraints
/// (no disjuncts means false, a single `true` constraint means the location satisfies it).
struct LocationPredicate {
    std::vector<std::vector<ClockConstraint>> disjuncts;

    bool holds(LocationId l, std::span<const std::int64_t> clocks) const;
    /// True when some location's verdict depends on clock values.
    bool depends_on_clocks() const;
    /// Clocks mentioned by any atom.
    ClockSet clocks() const;
};

/// Edge indices grouped by source location.
std::vector<std::vector<std::size_t>> edges_by_source(const Ipta& m);

/// Checks the structural invariants (valid distributions, declared clocks, initial
/// locations exist, per-location tables sized). Throws Error(InvalidModel / InvalidDistribution).
void check_well_formed(const Ipta& m);

/// Number of edges whose distribution is not a point-interval distribution.
std::size_t interval_edge_count(const Ipta& m);

} // namespace iptamc
