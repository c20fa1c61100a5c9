#include "iptamc/lang/resolve.hpp"

#include "iptamc/error.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>

namespace iptamc::lang {

Value parse_value(std::string_view text) {
    std::string s(text);
    if (s == "true") return true;
    if (s == "false") return false;
    Rational r;
    try {
        r = parse_rational(s);
    } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::InvalidArgument, "not a number: '" + s + "'");
    }
    bool integral_spelling = s.find_first_of(".eE/") == std::string::npos;
    if (integral_spelling && is_integer(r)) return static_cast<std::int64_t>(boost::multiprecision::numerator(r));
    return r;
}

std::pair<std::string, Value> parse_binding(std::string_view text) {
    auto eq = text.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw Error(ErrorKind::InvalidArgument, "expected NAME=VALUE, got '" + std::string(text) + "'");
    return {std::string(text.substr(0, eq)), parse_value(text.substr(eq + 1))};
}

std::string command_origin(const ModuleDecl& module, std::size_t k) {
    return module.name + " command " + std::to_string(k + 1) + " (line " + std::to_string(module.commands.at(k).pos.line) + ")";
}

namespace {

Value coerce(const Value& v, ConstType type, const std::string& name) {
    if (std::holds_alternative<bool>(v))
        throw Error(ErrorKind::InvalidArgument, "constant " + name + " must be numeric");
    if (type == ConstType::Double) {
        if (auto i = std::get_if<std::int64_t>(&v)) return Rational(*i);
        return v;
    }
    if (auto r = std::get_if<Rational>(&v)) {
        if (!is_integer(*r))
            throw Error(ErrorKind::InvalidArgument, "constant " + name + " is int but got " + to_display_string(*r));
        return static_cast<std::int64_t>(boost::multiprecision::numerator(*r));
    }
    return v;
}

void collect_identifiers(const Expr& e, std::set<std::string>& out) {
    switch (e.kind) {
    case Expr::Kind::Identifier: out.insert(e.text); break;
    case Expr::Kind::Unary: collect_identifiers(*e.lhs, out); break;
    case Expr::Kind::Binary:
        collect_identifiers(*e.lhs, out);
        collect_identifiers(*e.rhs, out);
        break;
    default: break;
    }
}

struct VectorHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ULL;
        return h;
    }
};

class ModuleElaborator {
public:
    ModuleElaborator(const ModuleDecl& decl, const Bindings& constants, const std::map<std::string, std::string>& owner)
        : decl_(decl), constants_(constants), owner_(owner) {}

    Ipta run();

private:
    Scope scope_for(const std::vector<std::int64_t>& values) const {
        Scope s;
        s.constants = &constants_;
        s.variable_names = &var_names_;
        s.variable_values = values;
        s.clock_names = &m_.clocks;
        return s;
    }
    void check_locality(const Expr& e, const std::string& where) const;
    LocationId intern(const std::vector<std::int64_t>& values);
    void expand(LocationId l);
    std::string action_of(std::size_t k) const {
        const auto& cmd = decl_.commands[k];
        return cmd.action.empty() ? "tau." + decl_.name + "." + std::to_string(k) : cmd.action;
    }
    std::string origin_of(std::size_t k) const { return command_origin(decl_, k); }

    const ModuleDecl& decl_;
    const Bindings& constants_;
    const std::map<std::string, std::string>& owner_;
    std::vector<std::string> var_names_;
    Ipta m_;
    std::unordered_map<std::vector<std::int64_t>, LocationId, VectorHash> ids_;
    std::deque<LocationId> frontier_;
};

void ModuleElaborator::check_locality(const Expr& e, const std::string& where) const {
    std::set<std::string> ids;
    collect_identifiers(e, ids);
    for (const auto& id : ids) {
        auto it = owner_.find(id);
        if (it != owner_.end() && it->second != decl_.name)
            throw Error(ErrorKind::InvalidModel,
                        where + " of module " + decl_.name + " reads '" + id + "' owned by module " + it->second +
                            " (cross-module reads are not supported)",
                        e.pos.line, e.pos.column);
    }
}

LocationId ModuleElaborator::intern(const std::vector<std::int64_t>& values) {
    auto [it, inserted] = ids_.try_emplace(values, static_cast<LocationId>(m_.locations.size()));
    if (inserted) {
        m_.locations.push_back(values);
        frontier_.push_back(it->second);
    }
    return it->second;
}

Ipta ModuleElaborator::run() {
    Scope constant_scope;
    constant_scope.constants = &constants_;
    std::vector<std::int64_t> init;
    for (const auto& v : decl_.variables) {
        Variable var;
        var.name = v.name;
        var.low = evaluate_int(*v.low, constant_scope, "lower bound of " + v.name);
        var.high = evaluate_int(*v.high, constant_scope, "upper bound of " + v.name);
        var.init = v.init ? evaluate_int(*v.init, constant_scope, "initial value of " + v.name) : var.low;
        if (var.low > var.high)
            throw Error(ErrorKind::InvalidModel, "empty range for " + v.name, v.pos.line, v.pos.column);
        if (var.init < var.low || var.init > var.high)
            throw Error(ErrorKind::RangeOverflow, "initial value of " + v.name + " outside its range", v.pos.line,
                        v.pos.column);
        m_.variables.push_back(var);
        var_names_.push_back(v.name);
        init.push_back(var.init);
    }
    for (const auto& c : decl_.clocks) m_.clocks.push_back(c.name);
    if (m_.clocks.size() > kMaxClocks) throw Error(ErrorKind::InvalidModel, "more than 64 clocks in " + decl_.name);
    if (decl_.invariant) check_locality(*decl_.invariant, "invariant");
    for (std::size_t k = 0; k < decl_.commands.size(); ++k) {
        const auto& cmd = decl_.commands[k];
        check_locality(*cmd.guard, "guard");
        for (const auto& alt : cmd.alternatives) {
            check_locality(*alt.lower, "weight");
            check_locality(*alt.upper, "weight");
            for (const auto& u : alt.updates) {
                auto it = owner_.find(u.target);
                if (it != owner_.end() && it->second != decl_.name)
                    throw Error(ErrorKind::InvalidModel,
                                "module " + decl_.name + " assigns '" + u.target + "' owned by module " + it->second,
                                u.pos.line, u.pos.column);
                check_locality(*u.value, "update");
            }
        }
        m_.actions.insert(action_of(k));
    }
    m_.initial.push_back(intern(init));
    while (!frontier_.empty()) {
        LocationId l = frontier_.front();
        frontier_.pop_front();
        expand(l);
    }
    m_.labels.assign(m_.locations.size(), {});
    m_.invariants.reserve(m_.locations.size());
    for (std::size_t l = 0; l < m_.locations.size(); ++l) {
        if (!decl_.invariant) {
            m_.invariants.push_back(ClockConstraint::always());
            continue;
        }
        auto dnf = to_dnf(*decl_.invariant, scope_for(m_.locations[l]));
        if (dnf.size() > 1)
            throw Error(ErrorKind::InvalidModel,
                        "invariant of module " + decl_.name + " is not convex at " +
                            m_.describe_location(static_cast<LocationId>(l)),
                        decl_.invariant->pos.line, decl_.invariant->pos.column);
        m_.invariants.push_back(dnf.empty() ? ClockConstraint::never() : dnf.front());
    }
    return std::move(m_);
}

void ModuleElaborator::expand(LocationId l) {
    const std::vector<std::int64_t> values = m_.locations[l];
    const Scope scope = scope_for(values);
    for (std::size_t k = 0; k < decl_.commands.size(); ++k) {
        const auto& cmd = decl_.commands[k];
        auto disjuncts = to_dnf(*cmd.guard, scope);
        if (disjuncts.empty()) continue;
        IntervalDistribution<EdgeOutcome> dist;
        for (const auto& alt : cmd.alternatives) {
            Rational lower = evaluate_number(*alt.lower, scope, "probability");
            Rational upper = alt.is_interval ? evaluate_number(*alt.upper, scope, "probability") : lower;
            std::vector<std::int64_t> next = values;
            ClockSet resets = 0;
            for (const auto& u : alt.updates) {
                if (auto c = m_.find_clock(u.target)) {
                    if (evaluate_int(*u.value, scope, "clock update") != 0)
                        throw Error(ErrorKind::InvalidModel, "clock " + u.target + " can only be reset to 0", u.pos.line,
                                    u.pos.column);
                    resets |= clock_bit(*c);
                    continue;
                }
                auto it = std::find(var_names_.begin(), var_names_.end(), u.target);
                auto idx = static_cast<std::size_t>(it - var_names_.begin());
                std::int64_t v = evaluate_int(*u.value, scope, "update of " + u.target);
                const auto& var = m_.variables[idx];
                if (v < var.low || v > var.high)
                    throw Error(ErrorKind::RangeOverflow,
                                u.target + "'=" + std::to_string(v) + " leaves [" + std::to_string(var.low) + ".." +
                                    std::to_string(var.high) + "] in " + origin_of(k) + " at " +
                                    m_.describe_location(l),
                                u.pos.line, u.pos.column);
                next[idx] = v;
            }
            dist.add(EdgeOutcome{resets, intern(next)}, lower, upper);
        }
        require_valid(dist, origin_of(k) + " at " + m_.describe_location(l));
        dist.drop_null_outcomes();
        for (const auto& guard : disjuncts) {
            Edge e;
            e.source = l;
            e.guard = guard;
            e.action = action_of(k);
            e.distribution = dist;
            e.origin = origin_of(k);
            m_.edges.push_back(std::move(e));
        }
    }
}

} // namespace

Bindings resolve_constants(const ModelSource& src, const Bindings& bindings) {
    Bindings out;
    for (const auto& [name, value] : bindings) {
        bool declared = std::any_of(src.constants.begin(), src.constants.end(),
                                    [&](const ConstDecl& c) { return c.name == name; });
        if (!declared) throw Error(ErrorKind::InvalidArgument, "no constant named " + name);
    }
    Scope scope;
    scope.constants = &out;
    for (const auto& c : src.constants) {
        auto b = bindings.find(c.name);
        if (b != bindings.end()) {
            out[c.name] = coerce(b->second, c.type, c.name);
        } else if (c.value) {
            out[c.name] = coerce(evaluate(*c.value, scope), c.type, c.name);
        } else {
            throw Error(ErrorKind::UnboundConstant, "constant " + c.name + " has no value; bind it with --const " + c.name + "=...",
                        c.pos.line, c.pos.column);
        }
    }
    return out;
}

ResolvedModel resolve(const ModelSource& src, const Bindings& bindings) {
    ResolvedModel out;
    out.constants = resolve_constants(src, bindings);
    std::map<std::string, std::string> owner;
    for (const auto& mod : src.modules) {
        for (const auto& v : mod.variables) owner[v.name] = mod.name;
        for (const auto& c : mod.clocks) owner[c.name] = mod.name;
    }
    if (src.modules.empty()) throw Error(ErrorKind::InvalidModel, "model has no modules");
    for (const auto& mod : src.modules) {
        out.modules.push_back(ModuleElaborator(mod, out.constants, owner).run());
        out.module_names.push_back(mod.name);
    }
    out.labels = src.labels;
    return out;
}

void apply_labels(Ipta& system, const std::vector<LabelDecl>& labels, const Bindings& constants) {
    std::vector<std::string> names;
    for (const auto& v : system.variables) names.push_back(v.name);
    system.labels.assign(system.location_count(), {});
    for (const auto& l : labels) system.label_names.insert(l.name);
    for (std::size_t loc = 0; loc < system.location_count(); ++loc) {
        std::map<std::string, bool> values;
        Scope scope;
        scope.constants = &constants;
        scope.variable_names = &names;
        scope.variable_values = system.locations[loc];
        scope.clock_names = &system.clocks;
        scope.label = [&](const std::string& name) -> std::optional<bool> {
            auto it = values.find(name);
            if (it == values.end()) return std::nullopt;
            return it->second;
        };
        for (const auto& l : labels) {
            if (mentions_clock(*l.predicate, scope))
                throw Error(ErrorKind::InvalidModel, "label \"" + l.name + "\" mentions a clock", l.pos.line, l.pos.column);
            bool v = evaluate_bool(*l.predicate, scope, "label \"" + l.name + "\"");
            values[l.name] = v;
            if (v) system.labels[loc].push_back(l.name);
        }
        std::sort(system.labels[loc].begin(), system.labels[loc].end());
    }
}

namespace {

LocationPredicate bind_predicate(const Expr& e, const Ipta& system, const Bindings& constants,
                                 const std::vector<std::string>& var_names) {
    LocationPredicate out;
    out.disjuncts.reserve(system.location_count());
    for (std::size_t loc = 0; loc < system.location_count(); ++loc) {
        Scope scope;
        scope.constants = &constants;
        scope.variable_names = &var_names;
        scope.variable_values = system.locations[loc];
        scope.clock_names = &system.clocks;
        scope.label = [&](const std::string& name) -> std::optional<bool> {
            if (!system.label_names.contains(name)) return std::nullopt;
            return system.has_label(static_cast<LocationId>(loc), name);
        };
        out.disjuncts.push_back(to_dnf(e, scope));
    }
    return out;
}

void check_labels(const Expr& e, const Ipta& system) {
    switch (e.kind) {
    case Expr::Kind::Label:
        if (!system.label_names.contains(e.text))
            throw Error(ErrorKind::UnknownLabel, "label \"" + e.text + "\" is not defined", e.pos.line, e.pos.column);
        break;
    case Expr::Kind::Unary: check_labels(*e.lhs, system); break;
    case Expr::Kind::Binary:
        check_labels(*e.lhs, system);
        check_labels(*e.rhs, system);
        break;
    default: break;
    }
}

} // namespace

BoundQuery bind_query(const Query& q, Ipta& system, const Bindings& constants) {
    check_labels(*q.target, system);
    if (q.left) check_labels(*q.left, system);
    std::set<std::string> ids;
    collect_identifiers(*q.target, ids);
    if (q.left) collect_identifiers(*q.left, ids);
    std::vector<std::string> var_names;
    for (const auto& v : system.variables) var_names.push_back(v.name);
    std::set<std::string> free;
    for (const auto& id : ids) {
        bool known = constants.contains(id) || system.find_variable(id) || system.find_clock(id);
        if (!known) free.insert(id);
    }
    BoundQuery out;
    out.query = q;
    std::optional<std::string> clock = q.formula_clock;
    if (clock) {
        if (system.find_clock(*clock) || system.find_variable(*clock) || constants.contains(*clock))
            throw Error(ErrorKind::InvalidTarget, "formula clock '" + *clock + "' clashes with a model name");
        free.erase(*clock);
    } else if (free.size() == 1) {
        clock = *free.begin();
        free.clear();
    }
    if (!free.empty()) {
        if (free.size() > 1 || clock)
            throw Error(ErrorKind::InvalidTarget, "at most one formula clock may appear in a query; unknown names: " +
                                                      [&] {
                                                          std::string s;
                                                          for (const auto& f : free) s += (s.empty() ? "" : ", ") + f;
                                                          return s;
                                                      }());
    }
    if (clock) {
        if (system.clocks.size() >= kMaxClocks) throw Error(ErrorKind::InvalidModel, "no room for the formula clock");
        out.formula_clock = static_cast<ClockId>(system.clocks.size());
        system.clocks.push_back(*clock);
        out.query.formula_clock = clock;
    }
    out.target = bind_predicate(*q.target, system, constants, var_names);
    if (q.left) out.left = bind_predicate(*q.left, system, constants, var_names);
    return out;
}

} // namespace iptamc::lang
