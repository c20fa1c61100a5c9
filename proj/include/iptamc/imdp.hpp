#pragma once

#include "iptamc/interval_distribution.hpp"
#include "iptamc/ipta.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace iptamc {

using StateId = std::uint32_t;

/// Finite interval MDP in compressed row form.
///
/// State s owns choices [choice_begin[s], choice_begin[s+1]); choice c owns transitions
/// [transition_begin[c], transition_begin[c+1]), sorted by target state.
struct Imdp {
    std::vector<std::string> clock_names;
    std::vector<LocationId> state_location;
    /// Clock values of state s at [s * clock_names.size(), (s+1) * clock_names.size()).
    std::vector<std::int64_t> state_clocks;
    std::vector<StateId> initial;

    std::vector<std::size_t> choice_begin{0};
    std::vector<std::string> choice_label;
    std::vector<std::size_t> transition_begin{0};
    std::vector<StateId> transition_target;
    std::vector<Rational> transition_lower;
    std::vector<Rational> transition_upper;

    /// Atomic proposition -> sorted states carrying it.
    std::map<std::string, std::vector<StateId>> labels;

    std::size_t state_count() const { return state_location.size(); }
    std::size_t choice_count() const { return choice_label.size(); }
    std::size_t transition_count() const { return transition_target.size(); }

    std::size_t choices_begin(StateId s) const { return choice_begin[s]; }
    std::size_t choices_end(StateId s) const { return choice_begin[s + 1]; }

    IntervalDistribution<StateId> distribution(std::size_t choice) const;
    std::span<const std::int64_t> clocks_of(StateId s) const;
};

/// Textual export: header `imdp <states> <choices> <transitions>`, one line per
/// transition `src <k>:<label> lower upper dst` with rationals as p/q, then
/// `label <name>: <ids>` lines (always including `init`).
void write_imdp(std::ostream& out, const Imdp& m);

} // namespace iptamc
