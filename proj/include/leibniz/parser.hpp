#pragma once

#include "leibniz/error.hpp"
#include "leibniz/expr.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace leibniz {

/// Byte offsets [start, end) into the parsed text.
struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class ParseErrorKind { UnexpectedToken, UnbalancedDelimiter, UnknownFunction, MalformedDifferential };

std::string_view kind_name(ParseErrorKind kind);

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, SourceSpan span, const std::string& message)
      : Error(ErrorCode::ParseError, message), kind_(kind), span_(span) {}

  ParseErrorKind kind() const noexcept { return kind_; }
  const SourceSpan& span() const noexcept { return span_; }

 private:
  ParseErrorKind kind_;
  SourceSpan span_;
};

/// An expression, optionally followed by "= rhs".
struct Statement {
  Expr lhs;
  std::optional<Expr> rhs;

  bool is_equation() const { return rhs.has_value(); }
  Equation equation() const;
};

/// Grammar (see docs/grammar.md):
///
///   statement := expr [ '=' expr ]
///   expr      := term { ('+' | '-') term }
///   term      := unary { ('*' | '/') unary }
///   unary     := ('-' | '+') unary | power
///   power     := primary [ '^' unary ]
///   primary   := number | constant | symbol | differential
///              | function '(' expr ')' | 'd' [order] '(' expr ')' | '(' expr ')'
///
/// Juxtaposition is rejected: "2z" is an error, "2*z" is required.
/// The result is normalized; d(...) operator applications are left as
/// Kind::Operator nodes for the differentiation module to resolve.
Expr parse_expr(std::string_view text);
Equation parse_equation(std::string_view text);
Statement parse_statement(std::string_view text);

/// Two-line diagnostic: the input followed by carets under the span.
std::string render_parse_error(const ParseError& error, std::string_view text);

}  // namespace leibniz
