#pragma once

#include "iptamc/ipta.hpp"
#include "iptamc/lang/ast.hpp"
#include "iptamc/lang/eval.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace iptamc::lang {

using Bindings = std::map<std::string, Value>;

/// Parses a `--const` value: integer literal, decimal or p/q.
Value parse_value(std::string_view text);

/// Splits `NAME=VALUE`. Throws Error(InvalidArgument).
std::pair<std::string, Value> parse_binding(std::string_view text);

/// Provenance string given to the edges of command `k` (0-based) of `module`.
std::string command_origin(const ModuleDecl& module, std::size_t k);

/// Evaluates every constant; bindings override declared values.
/// Throws Error(UnboundConstant) for a constant with neither.
Bindings resolve_constants(const ModelSource& src, const Bindings& bindings);

struct ResolvedModel {
    /// One automaton per module, in declaration order.
    std::vector<Ipta> modules;
    std::vector<std::string> module_names;
    std::vector<LabelDecl> labels;
    Bindings constants;
};

/// Elaborates every module over its reachable variable valuations. Throws Error(UnboundConstant |
/// RangeOverflow | InvalidDistribution | InvalidModel).
ResolvedModel resolve(const ModelSource& src, const Bindings& bindings);

/// Evaluates label predicates on the locations of a (composed) automaton.
void apply_labels(Ipta& system, const std::vector<LabelDecl>& labels, const Bindings& constants);

/// A query evaluated against an automaton: target/left as per-location clock formulas.
struct BoundQuery {
    Query query;
    LocationPredicate target;
    std::optional<LocationPredicate> left;
    /// Index of the formula clock appended to the automaton, if any.
    std::optional<ClockId> formula_clock;
};

/// Binds `q` to `system`. A formula clock (explicit `z.` or a single free identifier) is
/// appended to `system.clocks`. Throws Error(UnknownLabel | UnknownIdentifier | InvalidTarget).
BoundQuery bind_query(const Query& q, Ipta& system, const Bindings& constants);

} // namespace iptamc::lang
