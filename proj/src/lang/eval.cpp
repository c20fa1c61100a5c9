#include "iptamc/lang/eval.hpp"

#include "iptamc/error.hpp"

#include <algorithm>
#include <map>

namespace iptamc::lang {

std::string to_string(const Value& v) {
    if (auto i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    if (auto r = std::get_if<Rational>(&v)) return to_display_string(*r);
    return std::get<bool>(v) ? "true" : "false";
}

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& msg, const Expr& at) {
    throw Error(kind, msg, at.pos.line, at.pos.column);
}

std::optional<ClockId> lookup_clock(const std::string& name, const Scope& scope) {
    if (!scope.clock_names) return std::nullopt;
    const auto& names = *scope.clock_names;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<ClockId>(i);
    return std::nullopt;
}

std::optional<Value> lookup_value(const std::string& name, const Scope& scope) {
    if (scope.variable_names) {
        const auto& names = *scope.variable_names;
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return Value{scope.variable_values[i]};
    }
    if (scope.constants) {
        auto it = scope.constants->find(name);
        if (it != scope.constants->end()) return it->second;
    }
    return std::nullopt;
}

bool is_number(const Value& v) { return !std::holds_alternative<bool>(v); }

Rational as_rational(const Value& v) {
    if (auto i = std::get_if<std::int64_t>(&v)) return Rational(*i);
    return std::get<Rational>(v);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

Value arithmetic(BinaryOp op, const Value& a, const Value& b, const Expr& at) {
    if (!is_number(a) || !is_number(b)) fail(ErrorKind::InvalidModel, "arithmetic on a boolean value", at);
    if (std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b)) {
        std::int64_t x = std::get<std::int64_t>(a), y = std::get<std::int64_t>(b), r = 0;
        switch (op) {
        case BinaryOp::Add:
            if (__builtin_add_overflow(x, y, &r)) fail(ErrorKind::InvalidModel, "integer overflow", at);
            return r;
        case BinaryOp::Sub:
            if (__builtin_sub_overflow(x, y, &r)) fail(ErrorKind::InvalidModel, "integer overflow", at);
            return r;
        case BinaryOp::Mul:
            if (__builtin_mul_overflow(x, y, &r)) fail(ErrorKind::InvalidModel, "integer overflow", at);
            return r;
        case BinaryOp::Div:
            if (y == 0) fail(ErrorKind::InvalidModel, "division by zero", at);
            return floor_div(x, y);
        default: break;
        }
    }
    Rational x = as_rational(a), y = as_rational(b);
    switch (op) {
    case BinaryOp::Add: return Rational(x + y);
    case BinaryOp::Sub: return Rational(x - y);
    case BinaryOp::Mul: return Rational(x * y);
    case BinaryOp::Div:
        if (y == 0) fail(ErrorKind::InvalidModel, "division by zero", at);
        return Rational(x / y);
    default: break;
    }
    fail(ErrorKind::InvalidModel, "not an arithmetic operator", at);
}

bool compare(BinaryOp op, const Value& a, const Value& b, const Expr& at) {
    if (std::holds_alternative<bool>(a) || std::holds_alternative<bool>(b)) {
        if (!std::holds_alternative<bool>(a) || !std::holds_alternative<bool>(b))
            fail(ErrorKind::InvalidModel, "comparison between a boolean and a number", at);
        bool x = std::get<bool>(a), y = std::get<bool>(b);
        if (op == BinaryOp::Eq) return x == y;
        if (op == BinaryOp::Ne) return x != y;
        fail(ErrorKind::InvalidModel, "ordering comparison on booleans", at);
    }
    Rational x = as_rational(a), y = as_rational(b);
    switch (op) {
    case BinaryOp::Eq: return x == y;
    case BinaryOp::Ne: return x != y;
    case BinaryOp::Lt: return x < y;
    case BinaryOp::Le: return x <= y;
    case BinaryOp::Gt: return x > y;
    case BinaryOp::Ge: return x >= y;
    default: break;
    }
    fail(ErrorKind::InvalidModel, "not a comparison operator", at);
}

bool is_comparison(BinaryOp op) {
    return op == BinaryOp::Eq || op == BinaryOp::Ne || op == BinaryOp::Lt || op == BinaryOp::Le ||
           op == BinaryOp::Gt || op == BinaryOp::Ge;
}

bool as_bool(const Value& v, const Expr& at) {
    if (auto b = std::get_if<bool>(&v)) return *b;
    fail(ErrorKind::InvalidModel, "expected a boolean expression: " + to_string(at), at);
}

} // namespace

Value evaluate(const Expr& e, const Scope& scope) {
    switch (e.kind) {
    case Expr::Kind::Int: return e.int_value;
    case Expr::Kind::Decimal: return e.decimal_value;
    case Expr::Kind::Bool: return e.bool_value;
    case Expr::Kind::Identifier: {
        if (auto v = lookup_value(e.text, scope)) return *v;
        if (lookup_clock(e.text, scope))
            fail(ErrorKind::InvalidModel, "clock '" + e.text + "' used outside a clock constraint", e);
        fail(ErrorKind::UnknownIdentifier, "'" + e.text + "' is not defined here", e);
    }
    case Expr::Kind::Label: {
        std::optional<bool> v = scope.label ? scope.label(e.text) : std::nullopt;
        if (!v) fail(ErrorKind::UnknownLabel, "label \"" + e.text + "\" is not defined", e);
        return *v;
    }
    case Expr::Kind::Unary: {
        Value v = evaluate(*e.lhs, scope);
        if (e.unary == UnaryOp::Not) return !as_bool(v, *e.lhs);
        if (auto i = std::get_if<std::int64_t>(&v)) return -*i;
        if (auto r = std::get_if<Rational>(&v)) return Rational(-*r);
        fail(ErrorKind::InvalidModel, "negation of a boolean", e);
    }
    case Expr::Kind::Binary: {
        switch (e.binary) {
        case BinaryOp::And:
            return as_bool(evaluate(*e.lhs, scope), *e.lhs) && as_bool(evaluate(*e.rhs, scope), *e.rhs);
        case BinaryOp::Or:
            return as_bool(evaluate(*e.lhs, scope), *e.lhs) || as_bool(evaluate(*e.rhs, scope), *e.rhs);
        case BinaryOp::Implies:
            return !as_bool(evaluate(*e.lhs, scope), *e.lhs) || as_bool(evaluate(*e.rhs, scope), *e.rhs);
        case BinaryOp::Interval:
            fail(ErrorKind::InvalidModel, "interval '~' is only allowed as a branch weight", e);
        default: break;
        }
        Value a = evaluate(*e.lhs, scope);
        Value b = evaluate(*e.rhs, scope);
        if (is_comparison(e.binary)) return compare(e.binary, a, b, e);
        return arithmetic(e.binary, a, b, e);
    }
    }
    fail(ErrorKind::InvalidModel, "malformed expression", e);
}

std::int64_t evaluate_int(const Expr& e, const Scope& scope, const std::string& what) {
    Value v = evaluate(e, scope);
    if (auto i = std::get_if<std::int64_t>(&v)) return *i;
    if (auto r = std::get_if<Rational>(&v); r && is_integer(*r))
        return static_cast<std::int64_t>(boost::multiprecision::numerator(*r));
    fail(ErrorKind::InvalidModel, what + " must be an integer, got " + to_string(v), e);
}

bool evaluate_bool(const Expr& e, const Scope& scope, const std::string& what) {
    Value v = evaluate(e, scope);
    if (auto b = std::get_if<bool>(&v)) return *b;
    fail(ErrorKind::InvalidModel, what + " must be boolean, got " + to_string(v), e);
}

Rational evaluate_number(const Expr& e, const Scope& scope, const std::string& what) {
    Value v = evaluate(e, scope);
    if (!is_number(v)) fail(ErrorKind::InvalidModel, what + " must be a number, got " + to_string(v), e);
    return as_rational(v);
}

bool mentions_clock(const Expr& e, const Scope& scope) {
    switch (e.kind) {
    case Expr::Kind::Identifier: return !lookup_value(e.text, scope) && lookup_clock(e.text, scope).has_value();
    case Expr::Kind::Unary: return mentions_clock(*e.lhs, scope);
    case Expr::Kind::Binary: return mentions_clock(*e.lhs, scope) || mentions_clock(*e.rhs, scope);
    default: return false;
    }
}

// ---------------------------------------------------------------------------
// Clock formulas
// ---------------------------------------------------------------------------

namespace {

using Dnf = std::vector<ClockConstraint>;

Dnf dnf_true() { return {ClockConstraint::always()}; }
Dnf dnf_false() { return {}; }

void add_disjunct(Dnf& out, const ClockConstraint& cc) {
    if (cc.is_unsatisfiable()) return;
    if (std::find(out.begin(), out.end(), cc) != out.end()) return;
    out.push_back(cc);
}

Dnf simplify(Dnf d) {
    for (const auto& cc : d)
        if (cc.is_true()) return dnf_true();
    Dnf out;
    for (const auto& cc : d) add_disjunct(out, cc);
    return out;
}

Dnf disjoin(const Dnf& a, const Dnf& b) {
    Dnf out = a;
    out.insert(out.end(), b.begin(), b.end());
    return simplify(std::move(out));
}

Dnf conjoin(const Dnf& a, const Dnf& b) {
    Dnf out;
    for (const auto& x : a)
        for (const auto& y : b) add_disjunct(out, x.conjoin(y));
    return simplify(std::move(out));
}

/// Sum of clock terms with integer coefficients plus a constant.
struct Linear {
    std::map<ClockId, std::int64_t> coefficient;
    Rational constant = 0;
};

Linear scaled(Linear l, std::int64_t k) {
    for (auto& [c, v] : l.coefficient) v *= k;
    l.constant *= k;
    return l;
}

Linear combine(Linear a, const Linear& b, std::int64_t sign) {
    for (const auto& [c, v] : b.coefficient) a.coefficient[c] += sign * v;
    a.constant += sign * b.constant;
    return a;
}

Linear linear(const Expr& e, const Scope& scope) {
    if (!mentions_clock(e, scope)) {
        Linear l;
        l.constant = evaluate_number(e, scope, "clock bound");
        return l;
    }
    switch (e.kind) {
    case Expr::Kind::Identifier: {
        Linear l;
        l.coefficient[*lookup_clock(e.text, scope)] = 1;
        return l;
    }
    case Expr::Kind::Unary:
        if (e.unary == UnaryOp::Negate) return scaled(linear(*e.lhs, scope), -1);
        break;
    case Expr::Kind::Binary:
        switch (e.binary) {
        case BinaryOp::Add: return combine(linear(*e.lhs, scope), linear(*e.rhs, scope), 1);
        case BinaryOp::Sub: return combine(linear(*e.lhs, scope), linear(*e.rhs, scope), -1);
        case BinaryOp::Mul: {
            const Expr& clocked = mentions_clock(*e.lhs, scope) ? *e.lhs : *e.rhs;
            const Expr& factor = &clocked == e.lhs.get() ? *e.rhs : *e.lhs;
            if (mentions_clock(factor, scope)) break;
            return scaled(linear(clocked, scope), evaluate_int(factor, scope, "clock coefficient"));
        }
        default: break;
        }
        break;
    default: break;
    }
    fail(ErrorKind::InvalidModel, "unsupported clock expression: " + to_string(e), e);
}

enum class Cmp { Eq, Ne, Lt, Le, Gt, Ge };

Cmp to_cmp(BinaryOp op) {
    switch (op) {
    case BinaryOp::Eq: return Cmp::Eq;
    case BinaryOp::Ne: return Cmp::Ne;
    case BinaryOp::Lt: return Cmp::Lt;
    case BinaryOp::Le: return Cmp::Le;
    case BinaryOp::Gt: return Cmp::Gt;
    default: return Cmp::Ge;
    }
}

Cmp negated(Cmp c) {
    switch (c) {
    case Cmp::Eq: return Cmp::Ne;
    case Cmp::Ne: return Cmp::Eq;
    case Cmp::Lt: return Cmp::Ge;
    case Cmp::Le: return Cmp::Gt;
    case Cmp::Gt: return Cmp::Le;
    case Cmp::Ge: return Cmp::Lt;
    }
    return c;
}

Cmp mirrored(Cmp c) {
    switch (c) {
    case Cmp::Lt: return Cmp::Gt;
    case Cmp::Le: return Cmp::Ge;
    case Cmp::Gt: return Cmp::Lt;
    case Cmp::Ge: return Cmp::Le;
    default: return c;
    }
}

Relation to_relation(Cmp c) {
    switch (c) {
    case Cmp::Lt: return Relation::Lt;
    case Cmp::Le: return Relation::Le;
    case Cmp::Gt: return Relation::Gt;
    default: return Relation::Ge;
    }
}

/// `x ~ bound` or `x - y ~ bound` for an ordering relation.
Dnf ordered_atom(ClockId x, std::optional<ClockId> y, Cmp c, std::int64_t bound) {
    if (y && bound < 0) {
        std::swap(x, *y);
        c = mirrored(c);
        bound = -bound;
    }
    if (!y) {
        switch (c) {
        case Cmp::Le:
            if (bound < 0) return dnf_false();
            break;
        case Cmp::Lt:
            if (bound <= 0) return dnf_false();
            break;
        case Cmp::Ge:
            if (bound <= 0) return dnf_true();
            break;
        case Cmp::Gt:
            if (bound < 0) return dnf_true();
            break;
        default: break;
        }
    }
    return {ClockConstraint({ClockAtom{x, y, to_relation(c), bound}})};
}

Dnf atom(ClockId x, std::optional<ClockId> y, Cmp c, std::int64_t bound) {
    switch (c) {
    case Cmp::Eq: return conjoin(ordered_atom(x, y, Cmp::Le, bound), ordered_atom(x, y, Cmp::Ge, bound));
    case Cmp::Ne: return disjoin(ordered_atom(x, y, Cmp::Lt, bound), ordered_atom(x, y, Cmp::Gt, bound));
    default: return ordered_atom(x, y, c, bound);
    }
}

Dnf clock_comparison(const Expr& e, Cmp c, const Scope& scope) {
    Linear diff = combine(linear(*e.lhs, scope), linear(*e.rhs, scope), -1);
    std::vector<std::pair<ClockId, std::int64_t>> terms;
    for (const auto& [clock, k] : diff.coefficient)
        if (k != 0) terms.emplace_back(clock, k);
    if (terms.empty()) {
        bool v = compare(BinaryOp::Eq, diff.constant, Rational(0), e);
        switch (c) {
        case Cmp::Eq: break;
        case Cmp::Ne: v = !v; break;
        case Cmp::Lt: v = diff.constant < 0; break;
        case Cmp::Le: v = diff.constant <= 0; break;
        case Cmp::Gt: v = diff.constant > 0; break;
        case Cmp::Ge: v = diff.constant >= 0; break;
        }
        return v ? dnf_true() : dnf_false();
    }
    if (!is_integer(diff.constant))
        fail(ErrorKind::InvalidModel, "clock constraint with a non-integer bound: " + to_string(e), e);
    auto k = static_cast<std::int64_t>(boost::multiprecision::numerator(diff.constant));
    if (terms.size() == 1 && (terms[0].second == 1 || terms[0].second == -1)) {
        // x + k ~ 0  or  -x + k ~ 0
        if (terms[0].second == 1) return atom(terms[0].first, std::nullopt, c, -k);
        return atom(terms[0].first, std::nullopt, mirrored(c), k);
    }
    if (terms.size() == 2 && terms[0].second == -terms[1].second && (terms[0].second == 1 || terms[0].second == -1)) {
        ClockId pos = terms[0].second == 1 ? terms[0].first : terms[1].first;
        ClockId neg = terms[0].second == 1 ? terms[1].first : terms[0].first;
        return atom(pos, neg, c, -k);
    }
    fail(ErrorKind::InvalidModel, "unsupported clock constraint: " + to_string(e), e);
}

Dnf dnf(const Expr& e, const Scope& scope, bool positive) {
    if (!mentions_clock(e, scope)) {
        bool v = evaluate_bool(e, scope, "condition");
        return v == positive ? dnf_true() : dnf_false();
    }
    if (e.kind == Expr::Kind::Unary && e.unary == UnaryOp::Not) return dnf(*e.lhs, scope, !positive);
    if (e.kind == Expr::Kind::Binary) {
        switch (e.binary) {
        case BinaryOp::And:
            return positive ? conjoin(dnf(*e.lhs, scope, true), dnf(*e.rhs, scope, true))
                            : disjoin(dnf(*e.lhs, scope, false), dnf(*e.rhs, scope, false));
        case BinaryOp::Or:
            return positive ? disjoin(dnf(*e.lhs, scope, true), dnf(*e.rhs, scope, true))
                            : conjoin(dnf(*e.lhs, scope, false), dnf(*e.rhs, scope, false));
        case BinaryOp::Implies:
            return positive ? disjoin(dnf(*e.lhs, scope, false), dnf(*e.rhs, scope, true))
                            : conjoin(dnf(*e.lhs, scope, true), dnf(*e.rhs, scope, false));
        default:
            if (is_comparison(e.binary)) {
                Cmp c = to_cmp(e.binary);
                return clock_comparison(e, positive ? c : negated(c), scope);
            }
            break;
        }
    }
    fail(ErrorKind::InvalidModel, "clocks may only appear in comparisons: " + to_string(e), e);
}

} // namespace

std::vector<ClockConstraint> to_dnf(const Expr& e, const Scope& scope) { return dnf(e, scope, true); }

} // namespace iptamc::lang
