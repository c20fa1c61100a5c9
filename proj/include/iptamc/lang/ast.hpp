#pragma once

#include "iptamc/clock.hpp"
#include "iptamc/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace iptamc::lang {

struct SourcePos {
    int line = 0;
    int column = 0;
};

enum class UnaryOp { Not, Negate };

enum class BinaryOp { Add, Sub, Mul, Div, Eq, Ne, Lt, Le, Gt, Ge, And, Or, Implies, Interval };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Int, Decimal, Bool, Identifier, Label, Unary, Binary };

    Kind kind = Kind::Int;
    SourcePos pos;
    std::int64_t int_value = 0;
    /// Decimal literals keep their exact value and their spelling.
    Rational decimal_value;
    bool bool_value = false;
    /// Identifier name, label name, or decimal spelling.
    std::string text;
    UnaryOp unary = UnaryOp::Not;
    BinaryOp binary = BinaryOp::Add;
    ExprPtr lhs;
    ExprPtr rhs;

    static ExprPtr integer(std::int64_t v, SourcePos pos = {});
    static ExprPtr decimal(Rational v, std::string spelling, SourcePos pos = {});
    static ExprPtr boolean(bool v, SourcePos pos = {});
    static ExprPtr identifier(std::string name, SourcePos pos = {});
    static ExprPtr label(std::string name, SourcePos pos = {});
    static ExprPtr make_unary(UnaryOp op, ExprPtr operand, SourcePos pos = {});
    static ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos = {});
};

std::string to_string(const Expr& e);

enum class ConstType { Int, Double };

struct ConstDecl {
    std::string name;
    ConstType type = ConstType::Int;
    ExprPtr value;
    SourcePos pos;
};

struct VarDecl {
    std::string name;
    ExprPtr low;
    ExprPtr high;
    ExprPtr init;
    SourcePos pos;
};

struct ClockDecl {
    std::string name;
    SourcePos pos;
};

/// `name' = value`; clock updates must assign 0.
struct Update {
    std::string target;
    ExprPtr value;
    SourcePos pos;
};

/// One probabilistic branch. Scalar weights have `lower == upper`; an omitted weight is 1.
struct Alternative {
    ExprPtr lower;
    ExprPtr upper;
    bool is_interval = false;
    bool implicit_weight = false;
    std::vector<Update> updates;
    SourcePos pos;
};

struct Command {
    /// Empty for unsynchronised `[]` commands.
    std::string action;
    ExprPtr guard;
    std::vector<Alternative> alternatives;
    SourcePos pos;
};

struct ModuleDecl {
    std::string name;
    std::vector<VarDecl> variables;
    std::vector<ClockDecl> clocks;
    ExprPtr invariant;
    std::vector<Command> commands;
    SourcePos pos;
};

struct LabelDecl {
    std::string name;
    ExprPtr predicate;
    SourcePos pos;
};

struct ModelSource {
    std::string model_type = "ipta";
    std::vector<ConstDecl> constants;
    std::vector<ModuleDecl> modules;
    std::vector<LabelDecl> labels;
};

enum class QueryMode { Min, Max, Threshold };

/// `Pmin=? [...]`, `Pmax=? [...]` or `P~k [...]` over `F target` or `left U target`.
struct Query {
    QueryMode mode = QueryMode::Max;
    Relation threshold_relation = Relation::Ge;
    Rational threshold = 0;
    /// Null for `F target`.
    ExprPtr left;
    ExprPtr target;
    /// Set by an explicit `z.` reset prefix, or when binding against a model.
    std::optional<std::string> formula_clock;
    bool explicit_formula_clock = false;
    std::string text;
};

} // namespace iptamc::lang
