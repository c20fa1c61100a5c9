#pragma once

#include "iptamc/imdp.hpp"
#include "iptamc/ipta.hpp"
#include "iptamc/lang/resolve.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace iptamc {

enum class Semantics {
    /// Entry states with (delay, edge) choices; exact for reachability and much smaller.
    Collapsed,
    /// One state per digital valuation with unit `tick` steps.
    Ticks,
};

struct ExploreOptions {
    Semantics semantics = Semantics::Collapsed;
    std::size_t state_limit = 10'000'000;
    std::size_t transition_limit = 5'000'000;
};

struct ExploreResult {
    Imdp imdp;
    /// Non-target states without any outgoing step.
    std::vector<StateId> timelocks;
    std::vector<std::string> warnings;
    std::vector<std::int64_t> ceilings;
};

/// Largest constant compared against each clock in guards, invariants and the query.
std::vector<std::int64_t> ceilings(const Ipta& m, const lang::BoundQuery* q = nullptr);

/// Builds the digital-clocks interval MDP. States satisfying the query target carry the
/// label `target`, states satisfying the until left side carry `left`.
/// Throws Error(StateExplosion) past `state_limit` states or `transition_limit` transitions.
ExploreResult explore(const Ipta& m, const lang::BoundQuery* q = nullptr, const ExploreOptions& options = {});

Imdp build_imdp(const Ipta& m, const lang::BoundQuery* q = nullptr, const ExploreOptions& options = {});

} // namespace iptamc
