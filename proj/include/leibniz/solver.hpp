#pragma once

#include "leibniz/expr.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace leibniz {

/// A derivative written as a ratio of first-order differentials, "dy/dx".
struct RatioTarget {
  DifferentialAtom numerator;
  DifferentialAtom denominator;

  /// Parses "dy/dx". Throws ParseError on bad syntax and Error(InvalidArgument)
  /// when either side is not a first-order differential atom or both agree.
  static RatioTarget parse(std::string_view text);
  std::string str() const;
};

/// A solved value together with the expressions the solver divided by. Each
/// side condition c stands for "c != 0".
struct Solution {
  Expr value;
  std::vector<Expr> side_conditions;
};

/// Map from differential monomial (dx, d2y, dx^2, dx*dy, or 1 for terms free
/// of differentials) to its differential-free coefficient.
using DifferentialMonomialForm = std::map<Expr, Expr>;

/// Decomposes a normalized expression. Throws Error(NotLinearInDifferentials)
/// if a differential occurs anywhere other than in a monomial factor, for
/// example under a function, in a denominator or in an exponent.
DifferentialMonomialForm monomial_form(const Expr& e);
Expr from_monomial_form(const DifferentialMonomialForm& form);

/// Differentiates every equation and solves the resulting linear system for
/// target.numerator / target.denominator, treating each monomial ratio as an
/// unknown. When the system does not pin the target down, the smallest set of
/// other ratios is left free and appears in the value as m * D^-1, with D the
/// target's denominator. Ties are broken by how many free ratios survive in
/// the value, then by its node count.
Solution solve_for_ratio(const std::vector<Equation>& equations, const RatioTarget& target,
                         const Assumptions& assumptions = {});

/// solve_for_ratio after setting d(s) = 0 for each held symbol. The result
/// must not depend on any free ratio; otherwise Error(UnderdeterminedSystem).
Solution partial_ratio(const Equation& equation, const RatioTarget& target, const std::set<std::string>& held,
                       const Assumptions& assumptions = {});

struct SecondDerivative {
  /// d2y/dx^2 - (dy/dx)*d2x/dx^2 with dy/dx replaced by its value. The d2x
  /// term is absent when x is independent.
  Expr notation;
  /// The notation with every second differential resolved through the
  /// equations; free of differentials.
  Expr value;
  std::vector<Expr> side_conditions;
};

/// Second derivative of `dependent` with respect to `variable`.
SecondDerivative second_derivative(const std::vector<Equation>& equations, const std::string& dependent,
                                   const std::string& variable, const Assumptions& assumptions = {});

}  // namespace leibniz
