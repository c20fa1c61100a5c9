#pragma once

#include "iptamc/interval_distribution.hpp"

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

namespace iptamc {

enum class Direction { Min, Max };

/// Greedy extreme point of an interval polytope: outcomes are visited in `order` and each
/// receives as much mass as its upper bound allows while the outcomes still to come can
/// reach their lower bounds. Exact for exact `T`.
template <class T>
std::vector<T> greedy_extreme(std::span<const T> lower, std::span<const T> upper, std::span<const std::size_t> order) {
    std::vector<T> mu(lower.size(), T(0));
    T lower_rest = T(0);
    for (auto i : order) lower_rest += lower[i];
    T assigned = T(0);
    for (auto i : order) {
        lower_rest -= lower[i];
        T room = T(1) - assigned - lower_rest;
        T m = upper[i] < room ? upper[i] : room;
        if (m < lower[i]) m = lower[i];
        mu[i] = m;
        assigned += m;
    }
    return mu;
}

/// Indices of `values` sorted best-first for `dir`, ties broken by index.
inline std::vector<std::size_t> preference_order(std::span<const double> values, Direction dir) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (dir == Direction::Max)
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    else
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    return order;
}

struct InnerExtreme {
    /// Probability per entry of the input distribution.
    std::vector<double> distribution;
    double objective = 0;
};

/// Conforming distribution optimising sum(mu * values) in direction `dir`; `values` is
/// aligned with `d.entries()`. Throws Error(InvalidDistribution) for an invalid `d`.
template <class Outcome>
InnerExtreme inner_extreme(const IntervalDistribution<Outcome>& d, std::span<const double> values, Direction dir) {
    require_valid(d);
    if (values.size() != d.size()) throw Error(ErrorKind::InvalidArgument, "one value per outcome required");
    std::vector<double> lo, hi;
    for (const auto& e : d.entries()) {
        lo.push_back(to_double(e.lower));
        hi.push_back(to_double(e.upper));
    }
    auto order = preference_order(values, dir);
    InnerExtreme out;
    out.distribution = greedy_extreme<double>(lo, hi, order);
    for (std::size_t i = 0; i < values.size(); ++i) out.objective += out.distribution[i] * values[i];
    return out;
}

} // namespace iptamc
