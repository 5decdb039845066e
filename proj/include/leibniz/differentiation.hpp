#pragma once

#include "leibniz/expr.hpp"

#include <span>
#include <string_view>

namespace leibniz {

/// One entry of the rule table consulted by differential(). Rules are tried
/// in table order and the first whose pattern matches is applied.
struct DifferentialRule {
  std::string_view name;
  std::string_view pattern;
  std::string_view rewrite;
};

/// The fixed, ordered rule table. Quotients have no rule of their own: u/v is
/// the product u*v^-1 and is covered by the product and power rules.
std::span<const DifferentialRule> differential_rules();

/// Total differential d(e), normalized, with apply_independence() applied.
/// Pending d(...) operator nodes inside e are resolved first.
///
/// Throws Error(UnsupportedNode) for abs, and Error(NonPositiveBase) when a
/// power with a variable exponent has a base not known to be positive.
Expr differential(const Expr& e, const Assumptions& assumptions = {});
Equation differential(const Equation& eq, const Assumptions& assumptions = {});

/// d applied n >= 1 times, normalizing between applications.
Expr nth_differential(const Expr& e, int n, const Assumptions& assumptions = {});
Equation nth_differential(const Equation& eq, int n, const Assumptions& assumptions = {});

/// Replaces every d^k(u) operator node by the k-th differential of u.
Expr resolve_operators(const Expr& e, const Assumptions& assumptions = {});
Equation resolve_operators(const Equation& eq, const Assumptions& assumptions = {});

}  // namespace leibniz
