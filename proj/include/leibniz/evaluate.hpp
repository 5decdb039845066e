#pragma once

#include "leibniz/expr.hpp"

#include <map>
#include <optional>
#include <string>

namespace leibniz {

/// Values keyed by symbol name; differential atoms are keyed by their printed
/// name ("dx", "d2x").
using NumericBindings = std::map<std::string, double>;
using ExactBindings = std::map<std::string, Rational>;

/// Floating-point evaluation. Unbound atoms (and C, eps) raise
/// Error(UnboundSymbol); domain violations yield NaN rather than throwing.
double evaluate(const Expr& e, const NumericBindings& bindings);

/// Exact evaluation. Returns nullopt when the value is not a rational
/// (transcendental functions, irrational roots, pi, e) or when it divides by
/// zero. Unbound atoms raise Error(UnboundSymbol).
std::optional<Rational> evaluate_exact(const Expr& e, const ExactBindings& bindings);

/// Whether e is symbolically zero: structurally after normalization, or, for
/// expressions whose normal form does not expose the cancellation, by
/// agreement with zero at a fixed set of probe points (all atoms sampled in
/// [0.6, 2.4]). Used to choose pivots and to verify identities.
bool is_zero(const Expr& e);

/// Whether e is known to be strictly positive under the assumptions.
bool is_known_positive(const Expr& e, const Assumptions& assumptions);

}  // namespace leibniz
