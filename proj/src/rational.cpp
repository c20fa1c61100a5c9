#include "iptamc/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace iptamc {

namespace {

using boost::multiprecision::cpp_int;

cpp_int pow10(long n) {
    cpp_int r = 1;
    for (long i = 0; i < n; ++i) r *= 10;
    return r;
}

} // namespace

Rational parse_rational(std::string_view text) {
    auto fail = [&] { throw std::invalid_argument("not a rational number: '" + std::string(text) + "'"); };
    if (text.empty()) fail();

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Rational num = parse_rational(text.substr(0, slash));
        Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0) fail();
        return num / den;
    }

    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }
    cpp_int mantissa = 0;
    long frac_digits = 0;
    bool any_digit = false;
    bool after_point = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mantissa = mantissa * 10 + (c - '0');
            any_digit = true;
            if (after_point) ++frac_digits;
        } else if (c == '.' && !after_point) {
            after_point = true;
        } else {
            break;
        }
    }
    if (!any_digit) fail();
    long exponent = 0;
    if (i < text.size()) {
        if (text[i] != 'e' && text[i] != 'E') fail();
        ++i;
        bool exp_negative = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            exp_negative = text[i] == '-';
            ++i;
        }
        if (i >= text.size()) fail();
        for (; i < text.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(text[i]))) fail();
            exponent = exponent * 10 + (text[i] - '0');
            if (exponent > 4000) fail();
        }
        if (exp_negative) exponent = -exponent;
    }
    long scale = exponent - frac_digits;
    Rational r = scale >= 0 ? Rational(mantissa * pow10(scale)) : Rational(mantissa, pow10(-scale));
    return negative ? Rational(-r) : r;
}

std::string to_fraction_string(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

std::string to_display_string(const Rational& r) {
    cpp_int den = boost::multiprecision::denominator(r);
    cpp_int num = boost::multiprecision::numerator(r);
    if (den == 1) return num.str();

    long twos = 0, fives = 0;
    cpp_int d = den;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1) return num.str() + "/" + den.str();

    long digits = std::max(twos, fives);
    cpp_int scaled = num * pow10(digits) / den;
    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::string s = scaled.str();
    if (static_cast<long>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits) - s.size() + 1, '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    return negative ? "-" + s : s;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

} // namespace iptamc
