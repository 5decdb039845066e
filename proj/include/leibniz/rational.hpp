#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace leibniz {

/// Exact arbitrary-precision rational; the only numeric type allowed inside
/// symbolic normal forms.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// "3", "-3/4".
std::string to_string(const Rational& r);

/// Parses an unsigned decimal literal such as "12", "0.25" or "1.5e-3"
/// exactly. Returns nullopt on malformed input.
std::optional<Rational> parse_decimal(std::string_view text);

/// base^exponent for a machine-sized integer exponent. Throws on 0^negative.
Rational pow(const Rational& base, long exponent);

/// Exact q-th root of a non-negative rational when it exists.
std::optional<Rational> exact_root(const Rational& value, unsigned long q);

/// Fits the integer into a long when possible.
std::optional<long> to_long(const Integer& value);

}  // namespace leibniz
