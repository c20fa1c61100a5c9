#include "iptamc/lang/parser.hpp"

#include "iptamc/error.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace iptamc::lang {

// ---------------------------------------------------------------------------
// Expression constructors and printing
// ---------------------------------------------------------------------------

namespace {

std::shared_ptr<Expr> node(Expr::Kind kind, SourcePos pos) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->pos = pos;
    return e;
}

} // namespace

ExprPtr Expr::integer(std::int64_t v, SourcePos pos) {
    auto e = node(Kind::Int, pos);
    e->int_value = v;
    return e;
}

ExprPtr Expr::decimal(Rational v, std::string spelling, SourcePos pos) {
    auto e = node(Kind::Decimal, pos);
    e->decimal_value = std::move(v);
    e->text = std::move(spelling);
    return e;
}

ExprPtr Expr::boolean(bool v, SourcePos pos) {
    auto e = node(Kind::Bool, pos);
    e->bool_value = v;
    return e;
}

ExprPtr Expr::identifier(std::string name, SourcePos pos) {
    auto e = node(Kind::Identifier, pos);
    e->text = std::move(name);
    return e;
}

ExprPtr Expr::label(std::string name, SourcePos pos) {
    auto e = node(Kind::Label, pos);
    e->text = std::move(name);
    return e;
}

ExprPtr Expr::make_unary(UnaryOp op, ExprPtr operand, SourcePos pos) {
    auto e = node(Kind::Unary, pos);
    e->unary = op;
    e->lhs = std::move(operand);
    return e;
}

ExprPtr Expr::make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
    auto e = node(Kind::Binary, pos);
    e->binary = op;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
}

namespace {

enum Precedence { kInterval = 1, kImplies, kOr, kAnd, kNot, kCompare, kAdditive, kMultiplicative, kNegate, kPrimary };

int precedence(BinaryOp op) {
    switch (op) {
    case BinaryOp::Interval: return kInterval;
    case BinaryOp::Implies: return kImplies;
    case BinaryOp::Or: return kOr;
    case BinaryOp::And: return kAnd;
    case BinaryOp::Eq:
    case BinaryOp::Ne:
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return kCompare;
    case BinaryOp::Add:
    case BinaryOp::Sub: return kAdditive;
    case BinaryOp::Mul:
    case BinaryOp::Div: return kMultiplicative;
    }
    return kPrimary;
}

int precedence(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Unary: return e.unary == UnaryOp::Not ? kNot : kNegate;
    case Expr::Kind::Binary: return precedence(e.binary);
    default: return kPrimary;
    }
}

std::string_view symbol(BinaryOp op) {
    switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return " & ";
    case BinaryOp::Or: return " | ";
    case BinaryOp::Implies: return " => ";
    case BinaryOp::Interval: return "~";
    }
    return "?";
}

std::string wrap(const Expr& e, bool parens) {
    std::string s = to_string(e);
    return parens ? "(" + s + ")" : s;
}

} // namespace

std::string to_string(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Int: return std::to_string(e.int_value);
    case Expr::Kind::Decimal: return e.text;
    case Expr::Kind::Bool: return e.bool_value ? "true" : "false";
    case Expr::Kind::Identifier: return e.text;
    case Expr::Kind::Label: return "\"" + e.text + "\"";
    case Expr::Kind::Unary: {
        int p = precedence(e);
        bool parens = precedence(*e.lhs) < p || (e.unary == UnaryOp::Negate && precedence(*e.lhs) == kNegate);
        return std::string(e.unary == UnaryOp::Not ? "!" : "-") + wrap(*e.lhs, parens);
    }
    case Expr::Kind::Binary: {
        int p = precedence(e);
        bool right_assoc = e.binary == BinaryOp::Implies;
        bool lhs_parens = right_assoc ? precedence(*e.lhs) <= p : precedence(*e.lhs) < p;
        bool rhs_parens = right_assoc ? precedence(*e.rhs) < p : precedence(*e.rhs) <= p;
        return wrap(*e.lhs, lhs_parens) + std::string(symbol(e.binary)) + wrap(*e.rhs, rhs_parens);
    }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok { End, Ident, Int, Decimal, String, Punct };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourcePos pos;
};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    static const char* const kMultiChar[] = {"->", "=>", "<=", ">=", "!=", ".."};
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        SourcePos pos{line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), pos});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            bool decimal = false;
            if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                decimal = true;
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
                    decimal = true;
                    j = k;
                    while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
                }
            }
            out.push_back({decimal ? Tok::Decimal : Tok::Int, std::string(src.substr(i, j - i)), pos});
            advance(j - i);
            continue;
        }
        if (c == '"') {
            std::size_t j = i + 1;
            while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
            if (j >= src.size() || src[j] != '"') throw Error(ErrorKind::Syntax, "unterminated string", line, col);
            out.push_back({Tok::String, std::string(src.substr(i + 1, j - i - 1)), pos});
            advance(j - i + 1);
            continue;
        }
        bool matched = false;
        for (const char* m : kMultiChar) {
            std::string_view mv(m);
            if (src.substr(i, mv.size()) == mv) {
                out.push_back({Tok::Punct, std::string(mv), pos});
                advance(mv.size());
                matched = true;
                break;
            }
        }
        if (matched) continue;
        static const std::string_view kSingle = "()[]{};:,+-*/=<>!&|~'.?";
        if (kSingle.find(c) == std::string_view::npos)
            throw Error(ErrorKind::Syntax, std::string("unexpected character '") + c + "'", line, col);
        out.push_back({Tok::Punct, std::string(1, c), pos});
        advance(1);
    }
    out.push_back({Tok::End, "", {line, col}});
    return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(lex(text)) {}

    ModelSource model();
    Query query(std::string_view text);
    ExprPtr expression() { return interval_expr(); }
    bool at_end() const { return peek().kind == Tok::End; }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t k = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[k];
    }
    const Token& next() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }
    bool is_punct(std::string_view p, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::Punct && peek(ahead).text == p;
    }
    bool is_keyword(std::string_view k, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::Ident && peek(ahead).text == k;
    }
    bool accept(std::string_view p) {
        if (!is_punct(p)) return false;
        next();
        return true;
    }
    [[noreturn]] void fail(const std::string& msg, const Token& at) const {
        std::string found = at.kind == Tok::End ? "end of input" : "'" + at.text + "'";
        throw Error(ErrorKind::Syntax, msg + ", found " + found, at.pos.line, at.pos.column);
    }
    void expect(std::string_view p) {
        if (!accept(p)) fail("expected '" + std::string(p) + "'", peek());
    }
    void expect_keyword(std::string_view k) {
        if (!is_keyword(k)) fail("expected '" + std::string(k) + "'", peek());
        next();
    }
    Token expect_identifier() {
        if (peek().kind != Tok::Ident) fail("expected identifier", peek());
        return next();
    }

    ExprPtr interval_expr();
    ExprPtr implies_expr();
    ExprPtr or_expr();
    ExprPtr and_expr();
    ExprPtr not_expr();
    ExprPtr compare_expr();
    ExprPtr additive_expr();
    ExprPtr multiplicative_expr();
    ExprPtr unary_expr();
    ExprPtr primary_expr();

    void module_body(ModuleDecl& m);
    Command command();
    Alternative alternative();
    std::vector<Update> updates();
    bool starts_updates() const;

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

ExprPtr Parser::interval_expr() {
    ExprPtr lhs = implies_expr();
    if (is_punct("~")) {
        SourcePos pos = next().pos;
        ExprPtr rhs = implies_expr();
        return Expr::make_binary(BinaryOp::Interval, lhs, rhs, pos);
    }
    return lhs;
}

ExprPtr Parser::implies_expr() {
    ExprPtr lhs = or_expr();
    if (is_punct("=>")) {
        SourcePos pos = next().pos;
        return Expr::make_binary(BinaryOp::Implies, lhs, implies_expr(), pos);
    }
    return lhs;
}

ExprPtr Parser::or_expr() {
    ExprPtr lhs = and_expr();
    while (is_punct("|")) {
        SourcePos pos = next().pos;
        lhs = Expr::make_binary(BinaryOp::Or, lhs, and_expr(), pos);
    }
    return lhs;
}

ExprPtr Parser::and_expr() {
    ExprPtr lhs = not_expr();
    while (is_punct("&")) {
        SourcePos pos = next().pos;
        lhs = Expr::make_binary(BinaryOp::And, lhs, not_expr(), pos);
    }
    return lhs;
}

ExprPtr Parser::not_expr() {
    if (is_punct("!")) {
        SourcePos pos = next().pos;
        return Expr::make_unary(UnaryOp::Not, not_expr(), pos);
    }
    return compare_expr();
}

ExprPtr Parser::compare_expr() {
    ExprPtr lhs = additive_expr();
    for (;;) {
        BinaryOp op;
        if (is_punct("=")) op = BinaryOp::Eq;
        else if (is_punct("!=")) op = BinaryOp::Ne;
        else if (is_punct("<")) op = BinaryOp::Lt;
        else if (is_punct("<=")) op = BinaryOp::Le;
        else if (is_punct(">")) op = BinaryOp::Gt;
        else if (is_punct(">=")) op = BinaryOp::Ge;
        else return lhs;
        SourcePos pos = next().pos;
        lhs = Expr::make_binary(op, lhs, additive_expr(), pos);
    }
}

ExprPtr Parser::additive_expr() {
    ExprPtr lhs = multiplicative_expr();
    for (;;) {
        BinaryOp op;
        if (is_punct("+")) op = BinaryOp::Add;
        else if (is_punct("-")) op = BinaryOp::Sub;
        else return lhs;
        SourcePos pos = next().pos;
        lhs = Expr::make_binary(op, lhs, multiplicative_expr(), pos);
    }
}

ExprPtr Parser::multiplicative_expr() {
    ExprPtr lhs = unary_expr();
    for (;;) {
        BinaryOp op;
        if (is_punct("*")) op = BinaryOp::Mul;
        else if (is_punct("/")) op = BinaryOp::Div;
        else return lhs;
        SourcePos pos = next().pos;
        lhs = Expr::make_binary(op, lhs, unary_expr(), pos);
    }
}

ExprPtr Parser::unary_expr() {
    if (is_punct("-")) {
        SourcePos pos = next().pos;
        return Expr::make_unary(UnaryOp::Negate, unary_expr(), pos);
    }
    return primary_expr();
}

ExprPtr Parser::primary_expr() {
    const Token& t = peek();
    switch (t.kind) {
    case Tok::Int: {
        next();
        try {
            return Expr::integer(std::stoll(t.text), t.pos);
        } catch (const std::out_of_range&) {
            throw Error(ErrorKind::Syntax, "integer literal out of range", t.pos.line, t.pos.column);
        }
    }
    case Tok::Decimal:
        next();
        return Expr::decimal(parse_rational(t.text), t.text, t.pos);
    case Tok::String:
        next();
        return Expr::label(t.text, t.pos);
    case Tok::Ident:
        if (t.text == "true" || t.text == "false") {
            next();
            return Expr::boolean(t.text == "true", t.pos);
        }
        next();
        return Expr::identifier(t.text, t.pos);
    case Tok::Punct:
        if (t.text == "(") {
            next();
            ExprPtr inner = interval_expr();
            expect(")");
            return inner;
        }
        break;
    case Tok::End: break;
    }
    fail("expected expression", t);
}

// Model ----------------------------------------------------------------------

ModelSource Parser::model() {
    ModelSource m;
    if (is_keyword("ipta") || is_keyword("pta")) m.model_type = next().text;
    while (!at_end()) {
        if (is_keyword("const")) {
            ConstDecl c;
            c.pos = next().pos;
            if (is_keyword("int")) {
                next();
            } else if (is_keyword("double") || is_keyword("rational")) {
                next();
                c.type = ConstType::Double;
            }
            Token name = expect_identifier();
            c.name = name.text;
            c.pos = name.pos;
            if (accept("=")) c.value = interval_expr();
            expect(";");
            m.constants.push_back(std::move(c));
        } else if (is_keyword("module")) {
            next();
            ModuleDecl mod;
            Token name = expect_identifier();
            mod.name = name.text;
            mod.pos = name.pos;
            module_body(mod);
            expect_keyword("endmodule");
            m.modules.push_back(std::move(mod));
        } else if (is_keyword("label")) {
            next();
            LabelDecl l;
            if (peek().kind != Tok::String) fail("expected quoted label name", peek());
            const Token& name = next();
            l.name = name.text;
            l.pos = name.pos;
            expect("=");
            l.predicate = interval_expr();
            expect(";");
            m.labels.push_back(std::move(l));
        } else {
            fail("expected 'const', 'module' or 'label'", peek());
        }
    }
    return m;
}

void Parser::module_body(ModuleDecl& m) {
    while (!is_keyword("endmodule") && !at_end()) {
        if (is_keyword("invariant")) {
            const Token& kw = next();
            if (m.invariant) throw Error(ErrorKind::DuplicateDeclaration, "second invariant block in module " + m.name, kw.pos.line, kw.pos.column);
            m.invariant = interval_expr();
            expect_keyword("endinvariant");
        } else if (is_punct("[")) {
            m.commands.push_back(command());
        } else if (peek().kind == Tok::Ident && is_punct(":", 1)) {
            Token name = next();
            next();
            if (is_keyword("clock")) {
                next();
                expect(";");
                m.clocks.push_back({name.text, name.pos});
            } else {
                VarDecl v;
                v.name = name.text;
                v.pos = name.pos;
                expect("[");
                v.low = interval_expr();
                expect("..");
                v.high = interval_expr();
                expect("]");
                if (is_keyword("init")) {
                    next();
                    v.init = interval_expr();
                }
                expect(";");
                m.variables.push_back(std::move(v));
            }
        } else {
            fail("expected variable, clock, invariant or command", peek());
        }
    }
}

Command Parser::command() {
    Command c;
    c.pos = peek().pos;
    expect("[");
    if (peek().kind == Tok::Ident) c.action = next().text;
    expect("]");
    c.guard = interval_expr();
    expect("->");
    c.alternatives.push_back(alternative());
    while (accept("+")) c.alternatives.push_back(alternative());
    expect(";");
    return c;
}

bool Parser::starts_updates() const {
    if (is_keyword("true")) return true;
    return is_punct("(") && peek(1).kind == Tok::Ident && is_punct("'", 2);
}

Alternative Parser::alternative() {
    Alternative a;
    a.pos = peek().pos;
    if (starts_updates()) {
        a.implicit_weight = true;
        a.lower = a.upper = Expr::integer(1, a.pos);
    } else {
        ExprPtr weight = interval_expr();
        if (weight->kind == Expr::Kind::Binary && weight->binary == BinaryOp::Interval) {
            a.lower = weight->lhs;
            a.upper = weight->rhs;
            a.is_interval = true;
        } else {
            a.lower = a.upper = weight;
        }
        expect(":");
    }
    a.updates = updates();
    return a;
}

std::vector<Update> Parser::updates() {
    std::vector<Update> out;
    if (is_keyword("true")) {
        next();
        return out;
    }
    do {
        expect("(");
        Token name = expect_identifier();
        expect("'");
        expect("=");
        Update u{name.text, interval_expr(), name.pos};
        expect(")");
        out.push_back(std::move(u));
    } while (accept("&"));
    return out;
}

// Query ----------------------------------------------------------------------

Query Parser::query(std::string_view text) {
    Query q;
    q.text = std::string(text);
    if (peek().kind == Tok::Ident && is_punct(".", 1)) {
        q.formula_clock = next().text;
        q.explicit_formula_clock = true;
        next();
    }
    const Token& p = peek();
    if (p.kind != Tok::Ident) fail("expected P, Pmin or Pmax", p);
    std::string head = next().text;
    if (head == "Pmin" || head == "Pmax" || ((head == "P") && (is_keyword("min") || is_keyword("max")))) {
        bool is_min = head == "Pmin" || (head == "P" && next().text == "min");
        q.mode = is_min ? QueryMode::Min : QueryMode::Max;
        expect("=");
        expect("?");
    } else if (head == "P") {
        q.mode = QueryMode::Threshold;
        if (accept(">=")) q.threshold_relation = Relation::Ge;
        else if (accept(">")) q.threshold_relation = Relation::Gt;
        else if (accept("<=")) q.threshold_relation = Relation::Le;
        else if (accept("<")) q.threshold_relation = Relation::Lt;
        else fail("expected comparison after P", peek());
        const Token& k = peek();
        if (k.kind != Tok::Int && k.kind != Tok::Decimal) fail("expected probability threshold", k);
        next();
        q.threshold = parse_rational(k.text);
        if (q.threshold < 0 || q.threshold > 1)
            throw Error(ErrorKind::Syntax, "probability threshold outside [0,1]", k.pos.line, k.pos.column);
    } else {
        fail("expected P, Pmin or Pmax", p);
    }
    expect("[");
    if (is_keyword("F")) {
        next();
        q.target = interval_expr();
    } else {
        q.left = interval_expr();
        if (!is_keyword("U")) fail("expected 'U' or 'F'", peek());
        next();
        q.target = interval_expr();
    }
    expect("]");
    if (!at_end()) fail("unexpected trailing input", peek());
    return q;
}

// ---------------------------------------------------------------------------
// Semantic checks on the parsed model
// ---------------------------------------------------------------------------

std::optional<Rational> fold_literal(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Int: return Rational(e.int_value);
    case Expr::Kind::Decimal: return e.decimal_value;
    case Expr::Kind::Unary:
        if (e.unary == UnaryOp::Negate) {
            if (auto v = fold_literal(*e.lhs)) return Rational(-*v);
        }
        return std::nullopt;
    case Expr::Kind::Binary: {
        auto a = fold_literal(*e.lhs);
        auto b = fold_literal(*e.rhs);
        if (!a || !b) return std::nullopt;
        bool both_int = e.lhs->kind == Expr::Kind::Int && e.rhs->kind == Expr::Kind::Int;
        switch (e.binary) {
        case BinaryOp::Add: return *a + *b;
        case BinaryOp::Sub: return *a - *b;
        case BinaryOp::Mul: return *a * *b;
        case BinaryOp::Div:
            if (*b == 0 || both_int) return std::nullopt;
            return *a / *b;
        default: return std::nullopt;
        }
    }
    default: return std::nullopt;
    }
}

void check_identifiers(const Expr& e, const std::set<std::string>& known) {
    switch (e.kind) {
    case Expr::Kind::Identifier:
        if (!known.contains(e.text))
            throw Error(ErrorKind::UnknownIdentifier, "'" + e.text + "' is not declared", e.pos.line, e.pos.column);
        return;
    case Expr::Kind::Unary: check_identifiers(*e.lhs, known); return;
    case Expr::Kind::Binary:
        check_identifiers(*e.lhs, known);
        check_identifiers(*e.rhs, known);
        return;
    default: return;
    }
}

void check_model(const ModelSource& m) {
    std::set<std::string> names;
    auto declare = [&](const std::string& name, SourcePos pos) {
        if (!names.insert(name).second)
            throw Error(ErrorKind::DuplicateDeclaration, "'" + name + "' is declared twice", pos.line, pos.column);
    };
    for (const auto& c : m.constants) declare(c.name, c.pos);
    std::set<std::string> module_names;
    for (const auto& mod : m.modules) {
        if (!module_names.insert(mod.name).second)
            throw Error(ErrorKind::DuplicateDeclaration, "module '" + mod.name + "' is declared twice", mod.pos.line, mod.pos.column);
        for (const auto& v : mod.variables) declare(v.name, v.pos);
        for (const auto& c : mod.clocks) declare(c.name, c.pos);
    }
    std::set<std::string> label_names;
    for (const auto& l : m.labels)
        if (!label_names.insert(l.name).second)
            throw Error(ErrorKind::DuplicateDeclaration, "label \"" + l.name + "\" is declared twice", l.pos.line, l.pos.column);

    std::set<std::string> constants_so_far;
    for (const auto& c : m.constants) {
        if (c.value) check_identifiers(*c.value, constants_so_far);
        constants_so_far.insert(c.name);
    }
    for (const auto& mod : m.modules) {
        for (const auto& v : mod.variables) {
            check_identifiers(*v.low, constants_so_far);
            check_identifiers(*v.high, constants_so_far);
            if (v.init) check_identifiers(*v.init, constants_so_far);
        }
        if (mod.invariant) check_identifiers(*mod.invariant, names);
        for (const auto& cmd : mod.commands) {
            check_identifiers(*cmd.guard, names);
            for (const auto& alt : cmd.alternatives) {
                check_identifiers(*alt.lower, names);
                check_identifiers(*alt.upper, names);
                if (alt.is_interval) {
                    auto lo = fold_literal(*alt.lower);
                    auto hi = fold_literal(*alt.upper);
                    if (lo && hi && *lo > *hi)
                        throw Error(ErrorKind::InvalidDistribution,
                                    "interval lower bound " + to_display_string(*lo) + " exceeds upper bound " +
                                        to_display_string(*hi),
                                    alt.pos.line, alt.pos.column);
                }
                for (const auto& u : alt.updates) {
                    if (!names.contains(u.target) || constants_so_far.contains(u.target))
                        throw Error(ErrorKind::UnknownIdentifier, "'" + u.target + "' is not a variable or clock",
                                    u.pos.line, u.pos.column);
                    check_identifiers(*u.value, names);
                }
            }
        }
    }
    for (const auto& l : m.labels) check_identifiers(*l.predicate, names);
}

} // namespace

ModelSource parse_model(std::string_view text) {
    Parser p(text);
    ModelSource m = p.model();
    check_model(m);
    return m;
}

Query parse_query(std::string_view text) {
    Parser p(text);
    return p.query(text);
}

std::vector<Query> parse_properties(std::string_view text) {
    std::vector<Query> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto c = line.find("//"); c != std::string::npos) line.erase(c);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        std::string q = line.substr(first, last - first + 1);
        try {
            out.push_back(parse_query(q));
        } catch (const Error& e) {
            throw Error(e.kind(), "property on line " + std::to_string(line_no) + ": " + e.what(), line_no, e.column());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pretty printing
// ---------------------------------------------------------------------------

namespace {

std::string print_weight(const Alternative& a) {
    if (a.implicit_weight) return "";
    if (a.is_interval) {
        return "(" + to_string(*a.lower) + "~" + to_string(*a.upper) + "):";
    }
    std::string w = to_string(*a.lower);
    return (a.lower->kind == Expr::Kind::Binary ? "(" + w + ")" : w) + ":";
}

} // namespace

std::string pretty_print(const ModelSource& m) {
    std::ostringstream out;
    out << m.model_type << "\n";
    if (!m.constants.empty()) out << "\n";
    for (const auto& c : m.constants) {
        out << "const " << (c.type == ConstType::Int ? "int" : "double") << " " << c.name;
        if (c.value) out << " = " << to_string(*c.value);
        out << ";\n";
    }
    for (const auto& mod : m.modules) {
        out << "\nmodule " << mod.name << "\n";
        for (const auto& v : mod.variables) {
            out << "  " << v.name << " : [" << to_string(*v.low) << ".." << to_string(*v.high) << "]";
            if (v.init) out << " init " << to_string(*v.init);
            out << ";\n";
        }
        for (const auto& c : mod.clocks) out << "  " << c.name << " : clock;\n";
        if (mod.invariant) out << "  invariant\n    " << to_string(*mod.invariant) << "\n  endinvariant\n";
        for (const auto& cmd : mod.commands) {
            out << "  [" << cmd.action << "] " << to_string(*cmd.guard) << " -> ";
            for (std::size_t i = 0; i < cmd.alternatives.size(); ++i) {
                const auto& a = cmd.alternatives[i];
                if (i) out << " + ";
                out << print_weight(a);
                if (a.updates.empty()) out << "true";
                for (std::size_t u = 0; u < a.updates.size(); ++u) {
                    if (u) out << "&";
                    out << "(" << a.updates[u].target << "'=" << to_string(*a.updates[u].value) << ")";
                }
            }
            out << ";\n";
        }
        out << "endmodule\n";
    }
    if (!m.labels.empty()) out << "\n";
    for (const auto& l : m.labels) out << "label \"" << l.name << "\" = " << to_string(*l.predicate) << ";\n";
    return out.str();
}

std::string pretty_print(const Query& q) {
    std::string out;
    if (q.formula_clock && q.explicit_formula_clock) out += *q.formula_clock + ".";
    switch (q.mode) {
    case QueryMode::Min: out += "Pmin=?"; break;
    case QueryMode::Max: out += "Pmax=?"; break;
    case QueryMode::Threshold:
        out += "P" + std::string(to_string(q.threshold_relation)) + to_display_string(q.threshold);
        break;
    }
    out += " [ ";
    if (q.left) out += to_string(*q.left) + " U " + to_string(*q.target);
    else out += "F " + to_string(*q.target);
    return out + " ]";
}

} // namespace iptamc::lang
