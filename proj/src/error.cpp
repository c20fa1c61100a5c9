#include "iptamc/error.hpp"

namespace iptamc {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Syntax: return "syntax-error";
    case ErrorKind::DuplicateDeclaration: return "duplicate-declaration";
    case ErrorKind::UnknownIdentifier: return "unknown-identifier";
    case ErrorKind::UnboundConstant: return "unbound-constant";
    case ErrorKind::RangeOverflow: return "range-overflow";
    case ErrorKind::InvalidDistribution: return "invalid-distribution";
    case ErrorKind::InvalidModel: return "invalid-model";
    case ErrorKind::ClockNameClash: return "clock-name-clash";
    case ErrorKind::VariableNameClash: return "variable-name-clash";
    case ErrorKind::StateExplosion: return "state-explosion";
    case ErrorKind::SupportTooLarge: return "support-too-large";
    case ErrorKind::NonConformingChoice: return "non-conforming-choice";
    case ErrorKind::NonNormalizedChoice: return "non-normalized-choice";
    case ErrorKind::UnsupportedArity: return "unsupported-arity";
    case ErrorKind::UnknownLabel: return "unknown-label";
    case ErrorKind::InvalidTarget: return "invalid-target";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Io: return "io-error";
    }
    return "error";
}

namespace {

std::string decorate(ErrorKind kind, const std::string& message, int line, int column) {
    std::string out(to_string(kind));
    if (line > 0) {
        out += " at " + std::to_string(line);
        if (column > 0) out += ":" + std::to_string(column);
    }
    return out + ": " + message;
}

} // namespace

Error::Error(ErrorKind kind, const std::string& message, int line, int column)
    : std::runtime_error(decorate(kind, message, line, column)), kind_(kind), line_(line), column_(column) {}

} // namespace iptamc
