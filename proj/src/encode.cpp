#include "iptamc/encode.hpp"

#include "iptamc/error.hpp"
#include "iptamc/inner_extreme.hpp"

#include <algorithm>
#include <numeric>

namespace iptamc {

std::vector<std::vector<Rational>> extreme_distributions(const IntervalDistribution<EdgeOutcome>& d,
                                                         std::size_t max_support) {
    require_valid(d);
    if (d.size() > max_support)
        throw Error(ErrorKind::SupportTooLarge, "support of size " + std::to_string(d.size()) + " exceeds the limit of " +
                                                    std::to_string(max_support));
    std::vector<Rational> lower, upper;
    for (const auto& e : d.entries()) {
        lower.push_back(e.lower);
        upper.push_back(e.upper);
    }
    std::vector<std::vector<Rational>> out;
    if (d.is_point_interval()) {
        out.push_back(lower);
        return out;
    }
    std::vector<std::size_t> order(d.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    do {
        auto mu = greedy_extreme<Rational>(lower, upper, order);
        if (std::find(out.begin(), out.end(), mu) == out.end()) out.push_back(std::move(mu));
    } while (std::next_permutation(order.begin(), order.end()));
    return out;
}

namespace {

IntervalDistribution<EdgeOutcome> as_point(const IntervalDistribution<EdgeOutcome>& d, const std::vector<Rational>& mu) {
    IntervalDistribution<EdgeOutcome> out;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (mu[i] > 0) out.add(d[i].outcome, mu[i], mu[i]);
    return out;
}

} // namespace

Ipta pta_star(const Ipta& m, std::size_t max_support) {
    Ipta out = m;
    out.edges.clear();
    for (const auto& e : m.edges) {
        if (e.distribution.is_point_interval()) {
            out.edges.push_back(e);
            continue;
        }
        for (const auto& mu : extreme_distributions(e.distribution, max_support)) {
            Edge copy = e;
            copy.distribution = as_point(e.distribution, mu);
            out.edges.push_back(std::move(copy));
        }
    }
    return out;
}

Ipta sample(const Ipta& m, const EdgeChoice& choice) {
    for (const auto& [index, _] : choice)
        if (index >= m.edges.size())
            throw Error(ErrorKind::NonConformingChoice, "choice for edge " + std::to_string(index) + " which does not exist");
    Ipta out = m;
    for (std::size_t i = 0; i < out.edges.size(); ++i) {
        Edge& e = out.edges[i];
        auto it = choice.find(i);
        if (it == choice.end()) {
            if (!e.distribution.is_point_interval())
                throw Error(ErrorKind::NonConformingChoice, "no choice given for interval edge " + e.origin);
            continue;
        }
        const auto& chosen = it->second;
        Rational total = 0;
        IntervalDistribution<EdgeOutcome> d;
        for (const auto& entry : e.distribution.entries()) {
            auto c = chosen.find(entry.outcome);
            Rational p = c == chosen.end() ? Rational(0) : c->second;
            if (p < entry.lower || p > entry.upper)
                throw Error(ErrorKind::NonConformingChoice,
                            e.origin + ": probability " + to_display_string(p) + " for outcome to location " +
                                m.describe_location(entry.outcome.target) + " lies outside [" +
                                to_display_string(entry.lower) + "," + to_display_string(entry.upper) + "]");
            total += p;
            if (p > 0) d.add(entry.outcome, p, p);
        }
        for (const auto& [outcome, p] : chosen)
            if (!e.distribution.find(outcome) && p != 0)
                throw Error(ErrorKind::NonConformingChoice, e.origin + ": probability given for an outcome outside the support");
        if (total != 1)
            throw Error(ErrorKind::NonNormalizedChoice, e.origin + ": chosen probabilities sum to " + to_display_string(total));
        e.distribution = std::move(d);
    }
    return out;
}

Ipta scalar_sample(const Ipta& m, const Rational& y) {
    EdgeChoice choice;
    for (std::size_t i = 0; i < m.edges.size(); ++i) {
        const auto& d = m.edges[i].distribution;
        if (d.is_point_interval()) continue;
        if (d.size() != 2)
            throw Error(ErrorKind::UnsupportedArity, m.edges[i].origin + " has " + std::to_string(d.size()) +
                                                         " outcomes; a single value only fixes two-outcome edges");
        choice[i][d[0].outcome] = y;
        choice[i][d[1].outcome] = 1 - y;
    }
    return sample(m, choice);
}

Rational default_sample_value(const Ipta& m) {
    for (const auto& e : m.edges)
        if (!e.distribution.is_point_interval()) return (e.distribution[0].lower + e.distribution[0].upper) / 2;
    return 1;
}

} // namespace iptamc
