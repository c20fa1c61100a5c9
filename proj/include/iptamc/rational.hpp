#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace iptamc {

/// Exact rational used for every probability bound during model construction.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "3", "0.95", "1e-3" or "19/20" exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Always "p/q", including integers ("1/1").
std::string to_fraction_string(const Rational& r);

/// Shortest exact rendering: decimal when the denominator divides a power of ten,
/// "p/q" otherwise.
std::string to_display_string(const Rational& r);

double to_double(const Rational& r);

inline bool is_integer(const Rational& r) { return boost::multiprecision::denominator(r) == 1; }

} // namespace iptamc
