#include "leibniz/rational.hpp"

#include "leibniz/error.hpp"

#include <cctype>
#include <limits>

namespace leibniz {

std::string to_string(const Rational& r) {
  if (is_integer(r)) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

std::optional<Rational> parse_decimal(std::string_view text) {
  std::size_t i = 0;
  Integer mantissa = 0;
  long scale = 0;
  bool digits = false;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    mantissa = mantissa * 10 + (text[i] - '0');
    digits = true;
    ++i;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      mantissa = mantissa * 10 + (text[i] - '0');
      --scale;
      digits = true;
      ++i;
    }
  }
  if (!digits) return std::nullopt;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      negative = text[i] == '-';
      ++i;
    }
    long exponent = 0;
    bool exp_digits = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      exponent = exponent * 10 + (text[i] - '0');
      if (exponent > 4096) return std::nullopt;
      exp_digits = true;
      ++i;
    }
    if (!exp_digits) return std::nullopt;
    scale += negative ? -exponent : exponent;
  }
  if (i != text.size()) return std::nullopt;
  Rational value(mantissa);
  if (scale != 0) value *= pow(Rational(10), scale);
  return value;
}

Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw Error(ErrorCode::DegenerateExpression, "division by zero: 0 raised to a negative power");
    return pow(1 / base, -exponent);
  }
  Integer num = boost::multiprecision::pow(numerator(base), static_cast<unsigned>(exponent));
  Integer den = boost::multiprecision::pow(denominator(base), static_cast<unsigned>(exponent));
  return Rational(num, den);
}

namespace {

std::optional<Integer> integer_root(const Integer& value, unsigned long q) {
  if (value < 0) return std::nullopt;
  if (value < 2 || q == 1) return value;
  // Newton iteration on integers from an upper bound.
  Integer x = Integer(1) << (static_cast<unsigned>(boost::multiprecision::msb(value)) / q + 1);
  while (true) {
    Integer y = ((q - 1) * x + value / boost::multiprecision::pow(x, static_cast<unsigned>(q - 1))) / q;
    if (y >= x) break;
    x = y;
  }
  if (boost::multiprecision::pow(x, static_cast<unsigned>(q)) == value) return x;
  return std::nullopt;
}

}  // namespace

std::optional<Rational> exact_root(const Rational& value, unsigned long q) {
  if (value < 0 || q == 0) return std::nullopt;
  auto num = integer_root(numerator(value), q);
  if (!num) return std::nullopt;
  auto den = integer_root(denominator(value), q);
  if (!den) return std::nullopt;
  return Rational(*num, *den);
}

std::optional<long> to_long(const Integer& value) {
  if (value > std::numeric_limits<long>::max() || value < std::numeric_limits<long>::min()) return std::nullopt;
  return value.convert_to<long>();
}

std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateExpression: return "DegenerateExpression";
    case ErrorCode::UnsupportedNode: return "UnsupportedNode";
    case ErrorCode::NonPositiveBase: return "NonPositiveBase";
    case ErrorCode::NotLinearInDifferentials: return "NotLinearInDifferentials";
    case ErrorCode::TargetAbsent: return "TargetAbsent";
    case ErrorCode::UnderdeterminedSystem: return "UnderdeterminedSystem";
    case ErrorCode::HeldTargetConflict: return "HeldTargetConflict";
    case ErrorCode::ZeroDivision: return "ZeroDivision";
    case ErrorCode::DomainEdge: return "DomainEdge";
    case ErrorCode::OrderExhausted: return "OrderExhausted";
    case ErrorCode::NotExact: return "NotExact";
    case ErrorCode::Unmatched: return "Unmatched";
    case ErrorCode::UnboundSymbol: return "UnboundSymbol";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularIntegrand: return "SingularIntegrand";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace leibniz
