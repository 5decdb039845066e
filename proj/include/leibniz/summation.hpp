#pragma once

#include "leibniz/expr.hpp"
#include "leibniz/hyperreal.hpp"

#include <map>
#include <optional>
#include <string>

namespace leibniz {

/// A sum of coefficient * dv terms over first-order differential atoms.
class DifferentialForm {
 public:
  /// Throws Error(InvalidArgument) unless every term has differential degree
  /// exactly one in first-order atoms.
  explicit DifferentialForm(Expr e);

  const Expr& expr() const { return expr_; }

 private:
  Expr expr_;
};

struct Potential {
  /// Free of differentials; the constant of integration is kept separately.
  Expr expr;

  /// expr + C, with C printed last.
  std::string str() const;
};

/// Finds F with d(F) = form. Terms are integrated one atom at a time with the
/// other symbols held constant; after each step d(F) is subtracted and the
/// remainder is integrated again, so mixed pairs like x*dy + y*dx resolve to
/// x*y. The result is always checked by re-differentiation.
///
/// Throws Error(NotExact) when cross partials differ and Error(Unmatched)
/// when the form is exact but a coefficient has no antiderivative among the
/// supported rules (powers and reciprocals of linear arguments, exp, sin,
/// cos, constant bases).
Potential antidifferential(const DifferentialForm& form, const Assumptions& assumptions = {});

/// Symbol values at one end of a path.
using PathPoint = std::map<std::string, Rational>;

/// p(to) - p(from). Exact when the potential evaluates to rationals at both
/// points. Throws Error(UnboundSymbol) if a point leaves a symbol unbound.
Scalar total_difference(const Potential& p, const PathPoint& from, const PathPoint& to);

struct SumSpec {
  /// May contain the parameter's differential, and a curve's dependent
  /// symbol and its differential.
  Expr integrand;
  std::string parameter;
  Rational from;
  Rational to;
  /// y = f(x): y and dy are replaced by f(x) and (dy/dx)*dx.
  std::optional<Equation> curve;
};

struct SumOptions {
  double tolerance = 1e-8;
  long initial_slices = 1024;
  int max_doublings = 20;
};

struct SumResult {
  double value = 0;
  /// Slice count of the finer of the two sums behind the returned value.
  long slices = 0;
  /// |difference| between the last two extrapolated values.
  double error_estimate = 0;
};

/// Reduces the integrand to g(x)*dx (square roots of quadratic forms in the
/// differentials are factored as sqrt(...)*dx, taking dx > 0), then sums
/// g over midpoint slices, doubling the count until two successive
/// Richardson values (4*M(2n) - M(n))/3 agree within the tolerance.
///
/// Errors: InvalidArgument if the integrand does not reduce to g(x)*dx,
/// SingularIntegrand on a non-finite sample, NoConvergence after
/// max_doublings doublings.
SumResult infinite_sum(const SumSpec& spec, const SumOptions& options = {});

/// The integrand after curve substitution and factoring, as g(x) (dx removed).
Expr slice_coefficient(const SumSpec& spec);

}  // namespace leibniz
