#include "iptamc/compose.hpp"

#include "iptamc/error.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace iptamc {

namespace {

struct PairOutcome {
    ClockSet resets = 0;
    LocationId a = 0;
    LocationId b = 0;

    friend bool operator==(const PairOutcome&, const PairOutcome&) = default;
};

} // namespace

Ipta compose(const Ipta& a, const Ipta& b) {
    for (const auto& c : a.clocks)
        if (std::find(b.clocks.begin(), b.clocks.end(), c) != b.clocks.end())
            throw Error(ErrorKind::ClockNameClash, "clock '" + c + "' is declared by both components");
    for (const auto& v : a.variables)
        if (b.find_variable(v.name))
            throw Error(ErrorKind::VariableNameClash, "variable '" + v.name + "' is declared by both components");
    if (a.clocks.size() + b.clocks.size() > kMaxClocks)
        throw Error(ErrorKind::InvalidModel, "composition exceeds 64 clocks");

    const auto offset = static_cast<ClockId>(a.clocks.size());
    Ipta out;
    out.variables = a.variables;
    out.variables.insert(out.variables.end(), b.variables.begin(), b.variables.end());
    out.clocks = a.clocks;
    out.clocks.insert(out.clocks.end(), b.clocks.begin(), b.clocks.end());
    out.actions = a.actions;
    out.actions.insert(b.actions.begin(), b.actions.end());
    out.label_names = a.label_names;
    out.label_names.insert(b.label_names.begin(), b.label_names.end());

    const auto a_edges = edges_by_source(a);
    const auto b_edges = edges_by_source(b);

    std::map<std::pair<LocationId, LocationId>, LocationId> ids;
    std::vector<std::pair<LocationId, LocationId>> pairs;
    std::deque<LocationId> frontier;
    auto intern = [&](LocationId la, LocationId lb) {
        auto [it, inserted] = ids.try_emplace({la, lb}, static_cast<LocationId>(pairs.size()));
        if (inserted) {
            pairs.emplace_back(la, lb);
            frontier.push_back(it->second);
        }
        return it->second;
    };
    for (auto la : a.initial)
        for (auto lb : b.initial) out.initial.push_back(intern(la, lb));

    auto add_edge = [&](LocationId source, ClockConstraint guard, const std::string& action,
                        const IntervalDistribution<PairOutcome>& dist, std::string origin) {
        Edge e;
        e.source = source;
        e.guard = std::move(guard);
        e.action = action;
        for (const auto& entry : dist.entries())
            e.distribution.add(EdgeOutcome{entry.outcome.resets, intern(entry.outcome.a, entry.outcome.b)}, entry.lower,
                               entry.upper);
        e.origin = std::move(origin);
        out.edges.push_back(std::move(e));
    };

    while (!frontier.empty()) {
        LocationId id = frontier.front();
        frontier.pop_front();
        auto [la, lb] = pairs[id];
        for (auto ea : a_edges[la]) {
            const Edge& e = a.edges[ea];
            if (!b.actions.contains(e.action)) {
                IntervalDistribution<PairOutcome> d;
                for (const auto& entry : e.distribution.entries())
                    d.add({entry.outcome.resets, entry.outcome.target, lb}, entry.lower, entry.upper);
                add_edge(id, e.guard, e.action, d, e.origin);
                continue;
            }
            for (auto eb : b_edges[lb]) {
                const Edge& f = b.edges[eb];
                if (f.action != e.action) continue;
                ClockConstraint guard = e.guard.conjoin(f.guard.shifted(offset));
                if (guard.is_unsatisfiable()) continue;
                auto d = product(e.distribution, f.distribution, [&](const EdgeOutcome& x, const EdgeOutcome& y) {
                    return PairOutcome{x.resets | (y.resets << offset), x.target, y.target};
                });
                add_edge(id, guard, e.action, d, e.origin + " || " + f.origin);
            }
        }
        for (auto eb : b_edges[lb]) {
            const Edge& f = b.edges[eb];
            if (a.actions.contains(f.action)) continue;
            IntervalDistribution<PairOutcome> d;
            for (const auto& entry : f.distribution.entries())
                d.add({entry.outcome.resets << offset, la, entry.outcome.target}, entry.lower, entry.upper);
            add_edge(id, f.guard.shifted(offset), f.action, d, f.origin);
        }
    }

    out.locations.reserve(pairs.size());
    for (auto [la, lb] : pairs) {
        std::vector<std::int64_t> v = a.locations[la];
        v.insert(v.end(), b.locations[lb].begin(), b.locations[lb].end());
        out.locations.push_back(std::move(v));
        out.invariants.push_back(a.invariants[la].conjoin(b.invariants[lb].shifted(offset)));
        std::vector<std::string> labels = a.labels[la];
        labels.insert(labels.end(), b.labels[lb].begin(), b.labels[lb].end());
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        out.labels.push_back(std::move(labels));
    }
    return out;
}

Ipta compose_all(const std::vector<Ipta>& modules) {
    if (modules.empty()) throw Error(ErrorKind::InvalidModel, "nothing to compose");
    Ipta acc = modules.front();
    for (std::size_t i = 1; i < modules.size(); ++i) acc = compose(acc, modules[i]);
    return acc;
}

} // namespace iptamc
