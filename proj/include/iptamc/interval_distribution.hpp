#pragma once

#include "iptamc/error.hpp"
#include "iptamc/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace iptamc {

/// Finite interval distribution: each outcome carries a [lower, upper] probability bound.
///
/// Outcomes keep insertion order; adding an outcome twice sums its bounds.
template <class Outcome>
class IntervalDistribution {
public:
    struct Entry {
        Outcome outcome;
        Rational lower;
        Rational upper;

        friend bool operator==(const Entry&, const Entry&) = default;
    };

    IntervalDistribution() = default;

    IntervalDistribution(std::initializer_list<Entry> entries) {
        for (const auto& e : entries) add(e.outcome, e.lower, e.upper);
    }

    void add(const Outcome& outcome, const Rational& lower, const Rational& upper) {
        for (auto& e : entries_) {
            if (e.outcome == outcome) {
                e.lower += lower;
                e.upper += upper;
                return;
            }
        }
        entries_.push_back({outcome, lower, upper});
    }

    const std::vector<Entry>& entries() const { return entries_; }
    std::vector<Entry>& entries() { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const Entry& operator[](std::size_t i) const { return entries_[i]; }

    const Entry* find(const Outcome& outcome) const {
        for (const auto& e : entries_)
            if (e.outcome == outcome) return &e;
        return nullptr;
    }

    Rational sum_lower() const {
        Rational s = 0;
        for (const auto& e : entries_) s += e.lower;
        return s;
    }
    Rational sum_upper() const {
        Rational s = 0;
        for (const auto& e : entries_) s += e.upper;
        return s;
    }

    /// Outcomes with a positive upper bound.
    std::vector<Outcome> support() const {
        std::vector<Outcome> out;
        for (const auto& e : entries_)
            if (e.upper > 0) out.push_back(e.outcome);
        return out;
    }

    bool is_point_interval() const {
        return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.lower == e.upper; });
    }

    /// Removes outcomes whose upper bound is exactly zero.
    void drop_null_outcomes() {
        std::erase_if(entries_, [](const Entry& e) { return e.upper == 0; });
    }

    friend bool operator==(const IntervalDistribution&, const IntervalDistribution&) = default;

private:
    std::vector<Entry> entries_;
};

template <class Outcome>
IntervalDistribution<Outcome> point(const Outcome& outcome) {
    IntervalDistribution<Outcome> d;
    d.add(outcome, 1, 1);
    return d;
}

enum class ViolatedCondition {
    BoundOutsideUnitInterval,
    LowerAboveUpper,
    LowerSumAboveOne,
    UpperSumBelowOne,
    EmptySupport,
};

std::string_view to_string(ViolatedCondition c);

struct Violation {
    ViolatedCondition condition;
    /// Offending entry index, or npos for whole-distribution conditions.
    std::size_t entry = npos;
    std::string detail;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Verdict of `validate`: empty means the distribution is well formed.
struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::string describe() const {
        std::string out;
        for (const auto& v : violations) {
            if (!out.empty()) out += "; ";
            out += std::string(to_string(v.condition));
            if (!v.detail.empty()) out += " (" + v.detail + ")";
        }
        return out.empty() ? "ok" : out;
    }
};

template <class Outcome>
ValidationReport validate(const IntervalDistribution<Outcome>& d) {
    ValidationReport report;
    bool any_support = false;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto& e = d[i];
        if (e.lower < 0 || e.lower > 1 || e.upper < 0 || e.upper > 1)
            report.violations.push_back({ViolatedCondition::BoundOutsideUnitInterval, i,
                                         "outcome " + std::to_string(i) + " has [" + to_display_string(e.lower) + "," +
                                             to_display_string(e.upper) + "]"});
        if (e.lower > e.upper)
            report.violations.push_back({ViolatedCondition::LowerAboveUpper, i,
                                         "outcome " + std::to_string(i) + ": " + to_display_string(e.lower) + " > " +
                                             to_display_string(e.upper)});
        any_support = any_support || e.upper > 0;
    }
    Rational lo = d.sum_lower();
    Rational hi = d.sum_upper();
    if (lo > 1)
        report.violations.push_back(
            {ViolatedCondition::LowerSumAboveOne, Violation::npos, "sum of lower bounds = " + to_display_string(lo)});
    if (hi < 1)
        report.violations.push_back(
            {ViolatedCondition::UpperSumBelowOne, Violation::npos, "sum of upper bounds = " + to_display_string(hi)});
    if (!any_support) report.violations.push_back({ViolatedCondition::EmptySupport, Violation::npos, "empty support"});
    return report;
}

template <class Outcome>
void require_valid(const IntervalDistribution<Outcome>& d, const std::string& context = {}) {
    auto report = validate(d);
    if (!report.ok())
        throw Error(ErrorKind::InvalidDistribution, (context.empty() ? "" : context + ": ") + report.describe());
}

/// One failed minimality condition: 1 is the upper-bound condition, 2 the lower-bound one.
struct MinimalityViolation {
    std::size_t entry;
    int condition;
};

template <class Outcome>
std::vector<MinimalityViolation> minimality_violations(const IntervalDistribution<Outcome>& d) {
    require_valid(d);
    std::vector<MinimalityViolation> out;
    Rational lo = d.sum_lower();
    Rational hi = d.sum_upper();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto& e = d[i];
        if (e.upper + (lo - e.lower) > 1) out.push_back({i, 1});
        if (e.lower + (hi - e.upper) < 1) out.push_back({i, 2});
    }
    return out;
}

template <class Outcome>
bool is_minimal(const IntervalDistribution<Outcome>& d) {
    return minimality_violations(d).empty();
}

/// Tightens unattainable bounds until the distribution is minimal. The set of conforming
/// distributions is unchanged. Outcomes whose upper bound drops to zero are removed.
template <class Outcome>
IntervalDistribution<Outcome> prune(const IntervalDistribution<Outcome>& d) {
    require_valid(d);
    IntervalDistribution<Outcome> out = d;
    auto& entries = out.entries();
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& e : entries) {
            Rational others_lower = out.sum_lower() - e.lower;
            Rational others_upper = out.sum_upper() - e.upper;
            if (e.upper + others_lower > 1) {
                e.upper = 1 - others_lower;
                changed = true;
            }
            if (e.lower + others_upper < 1) {
                e.lower = std::max(Rational(0), Rational(1 - others_upper));
                changed = true;
            }
        }
    }
    out.drop_null_outcomes();
    return out;
}

/// Pointwise product of bounds over paired outcomes; `combine(a, b)` names the joint outcome.
template <class A, class B, class Combine>
auto product(const IntervalDistribution<A>& d1, const IntervalDistribution<B>& d2, Combine combine) {
    using C = decltype(combine(std::declval<const A&>(), std::declval<const B&>()));
    IntervalDistribution<C> out;
    for (const auto& a : d1.entries()) {
        if (a.upper == 0) continue;
        for (const auto& b : d2.entries()) {
            if (b.upper == 0) continue;
            out.add(combine(a.outcome, b.outcome), a.lower * b.lower, a.upper * b.upper);
        }
    }
    return out;
}

template <class A, class B>
IntervalDistribution<std::pair<A, B>> product(const IntervalDistribution<A>& d1, const IntervalDistribution<B>& d2) {
    return product(d1, d2, [](const A& a, const B& b) { return std::pair<A, B>(a, b); });
}

} // namespace iptamc
