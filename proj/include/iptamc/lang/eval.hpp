#pragma once

#include "iptamc/clock.hpp"
#include "iptamc/lang/ast.hpp"
#include "iptamc/rational.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace iptamc::lang {

using Value = std::variant<std::int64_t, Rational, bool>;

std::string to_string(const Value& v);

/// Name resolution for evaluation. Unset members resolve nothing.
struct Scope {
    const std::map<std::string, Value>* constants = nullptr;
    const std::vector<std::string>* variable_names = nullptr;
    std::span<const std::int64_t> variable_values;
    const std::vector<std::string>* clock_names = nullptr;
    std::function<std::optional<bool>(const std::string&)> label;
};

/// Evaluates a clock-free expression. Throws Error(UnknownIdentifier | UnknownLabel | InvalidModel).
Value evaluate(const Expr& e, const Scope& scope);

std::int64_t evaluate_int(const Expr& e, const Scope& scope, const std::string& what);
bool evaluate_bool(const Expr& e, const Scope& scope, const std::string& what);
Rational evaluate_number(const Expr& e, const Scope& scope, const std::string& what);

/// Partially evaluates a boolean expression with discrete parts fixed by `scope`; the
/// remaining clock comparisons become a disjunction of clock-constraint conjunctions.
/// Unsatisfiable and duplicate disjuncts are removed; an empty result means false.
std::vector<ClockConstraint> to_dnf(const Expr& e, const Scope& scope);

/// True when some identifier in `e` names a clock of `scope`.
bool mentions_clock(const Expr& e, const Scope& scope);

} // namespace iptamc::lang
