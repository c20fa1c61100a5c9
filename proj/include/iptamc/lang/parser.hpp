#pragma once

#include "iptamc/lang/ast.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace iptamc::lang {

/// Parses an `ipta` model. Throws Error(Syntax | DuplicateDeclaration | UnknownIdentifier |
/// InvalidDistribution) carrying line/column.
ModelSource parse_model(std::string_view text);

/// Parses `Pmin=? [ F e ]`, `Pmax=? [ l U e ]`, `P>=0.95 [ ... ]`, optionally prefixed by `z.`.
Query parse_query(std::string_view text);

/// Reads a property list: one query per non-empty line, `//` starts a comment.
std::vector<Query> parse_properties(std::string_view text);

/// Canonical source rendering; parse(pretty_print(m)) reproduces m.
std::string pretty_print(const ModelSource& model);
std::string pretty_print(const Query& query);

} // namespace iptamc::lang
