#pragma once

#include "leibniz/expr.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace leibniz {

enum class Style { Plain, LaTeX, JSON };

/// Plain output re-parses to the same normal form. JSON follows
/// docs/expr.schema.json.
std::string format_expr(const Expr& e, Style style = Style::Plain);
std::string format_equation(const Equation& eq, Style style = Style::Plain);

/// Plain form; lets test frameworks print expressions.
std::ostream& operator<<(std::ostream& out, const Expr& e);

nlohmann::json to_json(const Expr& e);
/// Inverse of to_json. Throws Error(InvalidArgument) on malformed trees.
Expr from_json(const nlohmann::json& j);

}  // namespace leibniz
