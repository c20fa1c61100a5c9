#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace iptamc {

using ClockId = std::uint32_t;

/// Reset sets are bit masks over clock ids; models are limited to 64 clocks.
using ClockSet = std::uint64_t;
inline constexpr std::size_t kMaxClocks = 64;

inline constexpr ClockSet clock_bit(ClockId c) { return ClockSet{1} << c; }

enum class Relation : std::uint8_t { Le, Lt, Gt, Ge };

std::string_view to_string(Relation rel);
Relation negate(Relation rel);
bool holds(std::int64_t lhs, Relation rel, std::int64_t rhs);

/// `clock ~ bound` or, when `other` is set, `clock - other ~ bound`.
struct ClockAtom {
    ClockId clock = 0;
    std::optional<ClockId> other;
    Relation rel = Relation::Le;
    std::int64_t bound = 0;

    static ClockAtom single(ClockId c, Relation rel, std::int64_t bound) { return {c, std::nullopt, rel, bound}; }
    static ClockAtom diagonal(ClockId c, ClockId d, Relation rel, std::int64_t bound) { return {c, d, rel, bound}; }

    bool is_diagonal() const { return other.has_value(); }
    bool is_upper() const { return !other && (rel == Relation::Le || rel == Relation::Lt); }
    bool mentions(ClockId c) const { return clock == c || other == c; }
    bool satisfied_by(std::span<const std::int64_t> valuation) const;

    friend bool operator==(const ClockAtom&, const ClockAtom&) = default;
    friend auto operator<=>(const ClockAtom&, const ClockAtom&) = default;
};

/// Conjunction of atoms. No atoms means `true`; `never()` is the unsatisfiable constraint.
class ClockConstraint {
public:
    ClockConstraint() = default;
    explicit ClockConstraint(std::vector<ClockAtom> atoms);

    static ClockConstraint always() { return {}; }
    static ClockConstraint never();

    const std::vector<ClockAtom>& atoms() const { return atoms_; }
    bool is_true() const { return !unsatisfiable_ && atoms_.empty(); }
    bool is_unsatisfiable() const { return unsatisfiable_; }

    bool satisfied_by(std::span<const std::int64_t> valuation) const;

    ClockConstraint conjoin(const ClockConstraint& other) const;
    /// Renumbers every clock id by `offset` (used when a composition appends clocks).
    ClockConstraint shifted(ClockId offset) const;

    std::string to_string(const std::vector<std::string>& clock_names) const;

    friend bool operator==(const ClockConstraint&, const ClockConstraint&) = default;

private:
    void normalize();

    std::vector<ClockAtom> atoms_;
    bool unsatisfiable_ = false;
};

/// Non-negative integer clock values indexed by clock id.
struct ClockValuation {
    std::vector<std::int64_t> values;

    static ClockValuation zero(std::size_t clocks) { return {std::vector<std::int64_t>(clocks, 0)}; }

    std::int64_t operator[](ClockId c) const { return values[c]; }
    std::size_t size() const { return values.size(); }

    ClockValuation reset(ClockSet clocks) const;
    ClockValuation delayed(std::int64_t d) const;
    bool satisfies(const ClockConstraint& cc) const { return cc.satisfied_by(values); }

    friend bool operator==(const ClockValuation&, const ClockValuation&) = default;
};

} // namespace iptamc
