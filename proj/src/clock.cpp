#include "iptamc/clock.hpp"

#include <algorithm>

namespace iptamc {

std::string_view to_string(Relation rel) {
    switch (rel) {
    case Relation::Le: return "<=";
    case Relation::Lt: return "<";
    case Relation::Gt: return ">";
    case Relation::Ge: return ">=";
    }
    return "?";
}

Relation negate(Relation rel) {
    switch (rel) {
    case Relation::Le: return Relation::Gt;
    case Relation::Lt: return Relation::Ge;
    case Relation::Gt: return Relation::Le;
    case Relation::Ge: return Relation::Lt;
    }
    return rel;
}

bool holds(std::int64_t lhs, Relation rel, std::int64_t rhs) {
    switch (rel) {
    case Relation::Le: return lhs <= rhs;
    case Relation::Lt: return lhs < rhs;
    case Relation::Gt: return lhs > rhs;
    case Relation::Ge: return lhs >= rhs;
    }
    return false;
}

bool ClockAtom::satisfied_by(std::span<const std::int64_t> valuation) const {
    std::int64_t lhs = valuation[clock];
    if (other) lhs -= valuation[*other];
    return holds(lhs, rel, bound);
}

ClockConstraint::ClockConstraint(std::vector<ClockAtom> atoms) : atoms_(std::move(atoms)) { normalize(); }

ClockConstraint ClockConstraint::never() {
    ClockConstraint cc;
    cc.unsatisfiable_ = true;
    return cc;
}

namespace {

// Integer-valued bound an atom imposes: x <= upper or x >= lower.
std::int64_t effective_bound(const ClockAtom& a) {
    switch (a.rel) {
    case Relation::Lt: return a.bound - 1;
    case Relation::Gt: return a.bound + 1;
    default: return a.bound;
    }
}

} // namespace

void ClockConstraint::normalize() {
    std::sort(atoms_.begin(), atoms_.end());
    atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
    // Keep only the tightest single-clock upper and lower bound per clock.
    std::vector<ClockAtom> kept;
    for (const auto& a : atoms_) {
        if (a.is_diagonal()) {
            kept.push_back(a);
            continue;
        }
        bool upper = a.is_upper();
        auto same = std::find_if(kept.begin(), kept.end(), [&](const ClockAtom& k) {
            return !k.is_diagonal() && k.clock == a.clock && k.is_upper() == upper;
        });
        if (same == kept.end()) {
            kept.push_back(a);
        } else if (upper ? effective_bound(a) < effective_bound(*same) : effective_bound(a) > effective_bound(*same)) {
            *same = a;
        }
    }
    for (const auto& lo : kept) {
        if (lo.is_diagonal() || lo.is_upper()) continue;
        for (const auto& hi : kept)
            if (!hi.is_diagonal() && hi.is_upper() && hi.clock == lo.clock && effective_bound(lo) > effective_bound(hi))
                unsatisfiable_ = true;
    }
    std::sort(kept.begin(), kept.end());
    atoms_ = std::move(kept);
    if (unsatisfiable_) atoms_.clear();
}

bool ClockConstraint::satisfied_by(std::span<const std::int64_t> valuation) const {
    if (unsatisfiable_) return false;
    for (const auto& a : atoms_)
        if (!a.satisfied_by(valuation)) return false;
    return true;
}

ClockConstraint ClockConstraint::conjoin(const ClockConstraint& other) const {
    if (unsatisfiable_ || other.unsatisfiable_) return never();
    std::vector<ClockAtom> merged = atoms_;
    merged.insert(merged.end(), other.atoms_.begin(), other.atoms_.end());
    return ClockConstraint(std::move(merged));
}

ClockConstraint ClockConstraint::shifted(ClockId offset) const {
    if (unsatisfiable_) return never();
    std::vector<ClockAtom> out = atoms_;
    for (auto& a : out) {
        a.clock += offset;
        if (a.other) *a.other += offset;
    }
    return ClockConstraint(std::move(out));
}

std::string ClockConstraint::to_string(const std::vector<std::string>& clock_names) const {
    if (unsatisfiable_) return "false";
    if (atoms_.empty()) return "true";
    std::string out;
    for (const auto& a : atoms_) {
        if (!out.empty()) out += " & ";
        out += clock_names.at(a.clock);
        if (a.other) out += "-" + clock_names.at(*a.other);
        out += std::string(iptamc::to_string(a.rel)) + std::to_string(a.bound);
    }
    return out;
}

ClockValuation ClockValuation::reset(ClockSet clocks) const {
    ClockValuation out = *this;
    for (std::size_t c = 0; c < out.values.size(); ++c)
        if (clocks & clock_bit(static_cast<ClockId>(c))) out.values[c] = 0;
    return out;
}

ClockValuation ClockValuation::delayed(std::int64_t d) const {
    ClockValuation out = *this;
    for (auto& v : out.values) v += d;
    return out;
}

} // namespace iptamc
