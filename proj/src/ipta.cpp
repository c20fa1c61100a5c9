#include "iptamc/ipta.hpp"

#include <algorithm>

namespace iptamc {

std::string Ipta::describe_location(LocationId l) const {
    std::string out;
    const auto& vals = locations.at(l);
    for (std::size_t i = 0; i < variables.size(); ++i) {
        if (i) out += ",";
        out += variables[i].name + "=" + std::to_string(vals[i]);
    }
    return out.empty() ? "l" + std::to_string(l) : out;
}

std::optional<ClockId> Ipta::find_clock(std::string_view name) const {
    for (std::size_t i = 0; i < clocks.size(); ++i)
        if (clocks[i] == name) return static_cast<ClockId>(i);
    return std::nullopt;
}

std::optional<std::size_t> Ipta::find_variable(std::string_view name) const {
    for (std::size_t i = 0; i < variables.size(); ++i)
        if (variables[i].name == name) return i;
    return std::nullopt;
}

bool Ipta::has_label(LocationId l, std::string_view name) const {
    const auto& ls = labels.at(l);
    return std::binary_search(ls.begin(), ls.end(), name, std::less<>{});
}

bool LocationPredicate::holds(LocationId l, std::span<const std::int64_t> clocks) const {
    for (const auto& cc : disjuncts.at(l))
        if (cc.satisfied_by(clocks)) return true;
    return false;
}

bool LocationPredicate::depends_on_clocks() const {
    for (const auto& ds : disjuncts)
        for (const auto& cc : ds)
            if (!cc.is_true()) return true;
    return false;
}

ClockSet LocationPredicate::clocks() const {
    ClockSet out = 0;
    for (const auto& ds : disjuncts)
        for (const auto& cc : ds)
            for (const auto& a : cc.atoms()) {
                out |= clock_bit(a.clock);
                if (a.other) out |= clock_bit(*a.other);
            }
    return out;
}

std::vector<std::vector<std::size_t>> edges_by_source(const Ipta& m) {
    std::vector<std::vector<std::size_t>> out(m.location_count());
    for (std::size_t e = 0; e < m.edges.size(); ++e) out.at(m.edges[e].source).push_back(e);
    return out;
}

namespace {

void check_clocks(const ClockConstraint& cc, std::size_t clocks, const std::string& where) {
    for (const auto& a : cc.atoms()) {
        if (a.clock >= clocks || (a.other && *a.other >= clocks))
            throw Error(ErrorKind::InvalidModel, where + " refers to an undeclared clock");
        if (a.bound < 0) throw Error(ErrorKind::InvalidModel, where + " has a negative clock bound");
    }
}

} // namespace

void check_well_formed(const Ipta& m) {
    const std::size_t n = m.location_count();
    if (m.clocks.size() > kMaxClocks) throw Error(ErrorKind::InvalidModel, "more than 64 clocks");
    if (m.invariants.size() != n || m.labels.size() != n)
        throw Error(ErrorKind::InvalidModel, "per-location tables do not match the location count");
    if (m.initial.empty()) throw Error(ErrorKind::InvalidModel, "no initial location");
    for (auto l : m.initial)
        if (l >= n) throw Error(ErrorKind::InvalidModel, "initial location out of range");
    for (std::size_t l = 0; l < n; ++l) {
        if (m.locations[l].size() != m.variables.size())
            throw Error(ErrorKind::InvalidModel, "location valuation has the wrong arity");
        check_clocks(m.invariants[l], m.clocks.size(), "invariant of " + m.describe_location(static_cast<LocationId>(l)));
    }
    const ClockSet declared = m.clocks.size() >= 64 ? ~ClockSet{0} : (clock_bit(static_cast<ClockId>(m.clocks.size())) - 1);
    for (const auto& e : m.edges) {
        if (e.source >= n) throw Error(ErrorKind::InvalidModel, "edge source out of range: " + e.origin);
        check_clocks(e.guard, m.clocks.size(), "guard of " + e.origin);
        require_valid(e.distribution, e.origin);
        for (const auto& o : e.distribution.entries()) {
            if (o.outcome.target >= n) throw Error(ErrorKind::InvalidModel, "edge target out of range: " + e.origin);
            if (o.outcome.resets & ~declared)
                throw Error(ErrorKind::InvalidModel, "edge resets an undeclared clock: " + e.origin);
        }
        if (!m.actions.contains(e.action))
            throw Error(ErrorKind::InvalidModel, "edge action '" + e.action + "' is not in the alphabet");
    }
}

std::size_t interval_edge_count(const Ipta& m) {
    return static_cast<std::size_t>(std::count_if(m.edges.begin(), m.edges.end(),
                                                  [](const Edge& e) { return !e.distribution.is_point_interval(); }));
}

} // namespace iptamc
