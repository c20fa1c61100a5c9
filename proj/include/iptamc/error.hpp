#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iptamc {

enum class ErrorKind {
    Syntax,
    DuplicateDeclaration,
    UnknownIdentifier,
    UnboundConstant,
    RangeOverflow,
    InvalidDistribution,
    InvalidModel,
    ClockNameClash,
    VariableNameClash,
    StateExplosion,
    SupportTooLarge,
    NonConformingChoice,
    NonNormalizedChoice,
    UnsupportedArity,
    UnknownLabel,
    InvalidTarget,
    InvalidArgument,
    Io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. `line`/`column` are 1-based and 0 when unknown.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, int line = 0, int column = 0);

    ErrorKind kind() const noexcept { return kind_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    ErrorKind kind_;
    int line_;
    int column_;
};

} // namespace iptamc
