#include "leibniz/summation.hpp"

#include "leibniz/differentiation.hpp"
#include "leibniz/error.hpp"
#include "leibniz/evaluate.hpp"
#include "leibniz/format.hpp"
#include "leibniz/solver.hpp"

#include <cmath>

namespace leibniz {

namespace {

bool mentions(const Expr& e, const std::string& symbol) { return free_atoms(e).symbols.contains(symbol); }

std::string fresh_symbol(const Expr& e) {
  Atoms atoms = free_atoms(e);
  std::string name = "w";
  for (int i = 1; atoms.symbols.contains(name); ++i) name = "w" + std::to_string(i);
  return name;
}

// The partial derivative of p with respect to v, holding every other symbol.
Expr partial(const Expr& p, const std::string& v, const Assumptions& assumptions) {
  if (!mentions(p, v)) return Expr();
  std::string w = fresh_symbol(p);
  std::set<std::string> held = free_atoms(p).symbols;
  held.erase(v);
  return partial_ratio(Equation(sym(w), p), RatioTarget{{w, 1}, {v, 1}}, held, assumptions).value;
}

// Splits e = slope * v + intercept when e is linear in v.
std::optional<std::pair<Expr, Expr>> linear_in(const Expr& e, const std::string& v) {
  Expr intercept = substitute(e, {{sym(v), Expr()}});
  Expr slope = (e - intercept) / sym(v);
  if (mentions(slope, v) || slope.is_zero()) return std::nullopt;
  return std::pair{slope, intercept};
}

// Antiderivative in v of a single v-dependent factor.
std::optional<Expr> integrate_factor(const Expr& f, const std::string& v) {
  if (f.is(Kind::Function)) {
    auto lin = linear_in(f.argument(), v);
    if (!lin) return std::nullopt;
    const Expr& u = f.argument();
    const Expr& a = lin->first;
    switch (f.function()) {
      case Function::Exp: return f / a;
      case Function::Sin: return -Expr::apply(Function::Cos, u) / a;
      case Function::Cos: return Expr::apply(Function::Sin, u) / a;
      default: return std::nullopt;
    }
  }
  Expr base = f;
  Expr exponent = num(1);
  if (f.is(Kind::Power)) {
    base = f.base();
    exponent = f.exponent();
  }
  if (!mentions(exponent, v)) {
    if (base.is(Kind::Function) && base.function() == Function::Cos && exponent.is_number(-2)) {
      auto lin = linear_in(base.argument(), v);
      if (!lin) return std::nullopt;
      return Expr::apply(Function::Tan, base.argument()) / lin->first;
    }
    auto lin = linear_in(base, v);
    if (!lin) return std::nullopt;
    if (exponent.is_number(-1)) return Expr::apply(Function::Ln, base) / lin->first;
    Expr n1 = exponent + num(1);
    return pow(base, n1) / (n1 * lin->first);
  }
  if (!mentions(base, v)) {
    auto lin = linear_in(exponent, v);
    if (!lin) return std::nullopt;
    return f / (Expr::apply(Function::Ln, base) * lin->first);
  }
  return std::nullopt;
}

// Antiderivative in v treating every other symbol as a constant.
std::optional<Expr> integrate(const Expr& c, const std::string& v) {
  if (!mentions(c, v)) return c * sym(v);
  if (c.is(Kind::Sum)) {
    std::vector<Expr> parts;
    for (const Expr& t : c.operands()) {
      auto g = integrate(t, v);
      if (!g) return std::nullopt;
      parts.push_back(*g);
    }
    return Expr::sum(std::move(parts));
  }
  if (c.is(Kind::Product)) {
    std::vector<Expr> constant;
    std::optional<Expr> variable;
    for (const Expr& f : c.operands()) {
      if (!mentions(f, v)) {
        constant.push_back(f);
      } else if (variable) {
        return std::nullopt;
      } else {
        variable = f;
      }
    }
    auto g = integrate_factor(*variable, v);
    if (!g) return std::nullopt;
    constant.push_back(*g);
    return Expr::product(std::move(constant));
  }
  return integrate_factor(c, v);
}

[[noreturn]] void unmatched(const Expr& e) {
  throw Error(ErrorCode::Unmatched, "no antiderivative rule matches '" + format_expr(e) + "'");
}

}  // namespace

DifferentialForm::DifferentialForm(Expr e) : expr_(normalize(e)) {
  for (const auto& [monomial, coefficient] : monomial_form(expr_)) {
    if (!monomial.is(Kind::Differential) || monomial.order() != 1) {
      throw Error(ErrorCode::InvalidArgument,
                  "'" + format_expr(monomial * coefficient) + "' is not a coefficient times a first-order differential");
    }
  }
}

std::string Potential::str() const {
  if (expr.is_zero()) return "C";
  return format_expr(expr) + " + C";
}

Potential antidifferential(const DifferentialForm& form, const Assumptions& assumptions) {
  DifferentialMonomialForm terms = monomial_form(form.expr());

  // Exactness: cross partials must agree for every pair of variables. A
  // symbol without its own differential term has coefficient 0.
  std::set<std::string> variables = free_atoms(form.expr()).symbols;
  for (const auto& [m, c] : terms) variables.insert(m.name());
  auto coefficient = [&terms](const std::string& v) {
    auto it = terms.find(dvar(v));
    return it == terms.end() ? Expr() : it->second;
  };
  for (const std::string& u : variables) {
    const Expr p = coefficient(u);
    for (const std::string& v : variables) {
      if (u >= v) continue;
      const Expr q = coefficient(v);
      if (!is_zero(partial(p, v, assumptions) - partial(q, u, assumptions))) {
        throw Error(ErrorCode::NotExact, "the form is not exact: the cross partials of d" + u + " and d" + v + " differ");
      }
    }
  }

  Expr potential;
  Expr remaining = form.expr();
  constexpr int kMaxRounds = 32;
  for (int round = 0; round < kMaxRounds && !is_zero(remaining); ++round) {
    std::optional<Expr> step;
    for (const auto& [m, c] : monomial_form(remaining)) {
      step = integrate(c, m.name());
      if (step) break;
    }
    if (!step) unmatched(remaining);
    potential = potential + *step;
    Expr next = remaining - differential(*step, assumptions);
    if (next == remaining) unmatched(remaining);
    remaining = next;
  }
  if (!is_zero(differential(potential, assumptions) - form.expr())) unmatched(form.expr());
  return Potential{potential};
}

Scalar total_difference(const Potential& p, const PathPoint& from, const PathPoint& to) {
  auto check = [&p](const PathPoint& point) {
    for (const std::string& s : free_atoms(p.expr).symbols) {
      if (!point.contains(s)) throw Error(ErrorCode::UnboundSymbol, "the path point does not bind '" + s + "'");
    }
  };
  check(from);
  check(to);
  auto exact_a = evaluate_exact(p.expr, from);
  auto exact_b = evaluate_exact(p.expr, to);
  if (exact_a && exact_b) return Scalar(*exact_b - *exact_a);
  auto numeric = [](const PathPoint& point) {
    NumericBindings out;
    for (const auto& [k, v] : point) out[k] = to_double(v);
    return out;
  };
  return Scalar::approx(evaluate(p.expr, numeric(to)) - evaluate(p.expr, numeric(from)));
}

namespace {

// sqrt(R) with R a quadratic form in the differentials becomes
// sqrt(R / dx^2) * dx, taking dx > 0.
Expr factor_radicals(const Expr& e, const Expr& dx) {
  if (!e.has_differential()) return e;
  switch (e.kind()) {
    case Kind::Function:
      return Expr::apply(e.function(), factor_radicals(e.argument(), dx));
    case Kind::Sum:
    case Kind::Product: {
      std::vector<Expr> parts;
      for (const Expr& x : e.operands()) parts.push_back(factor_radicals(x, dx));
      return e.is(Kind::Sum) ? Expr::sum(std::move(parts)) : Expr::product(std::move(parts));
    }
    case Kind::Power: {
      Expr inner = factor_radicals(e.base(), dx);
      if (e.exponent().is_number() && denominator(e.exponent().value()) == 2) {
        Expr scaled = inner / pow(dx, 2);
        if (!scaled.has_differential()) return pow(scaled, e.exponent()) * pow(dx, e.exponent() * num(2));
      }
      return pow(inner, e.exponent());
    }
    default:
      return e;
  }
}

}  // namespace

Expr slice_coefficient(const SumSpec& spec) {
  const Expr dx = dvar(spec.parameter);
  Expr integrand = spec.integrand;
  if (spec.curve) {
    const Expr& lhs = spec.curve->lhs();
    if (!lhs.is(Kind::Symbol) || lhs.name() == spec.parameter || mentions(spec.curve->rhs(), lhs.name())) {
      throw Error(ErrorCode::InvalidArgument, "the curve must have the form y = f(" + spec.parameter + ")");
    }
    Expr slope = solve_for_ratio({*spec.curve}, RatioTarget{{lhs.name(), 1}, {spec.parameter, 1}}).value;
    integrand = substitute(integrand, {{lhs, spec.curve->rhs()}, {dvar(lhs.name()), substitute(slope, {{lhs, spec.curve->rhs()}}) * dx}});
  }
  Expr g = factor_radicals(integrand, dx) / dx;
  if (g.has_differential()) {
    throw Error(ErrorCode::InvalidArgument,
                "the integrand does not reduce to g(" + spec.parameter + ")*d" + spec.parameter + ": " + format_expr(integrand));
  }
  return g;
}

SumResult infinite_sum(const SumSpec& spec, const SumOptions& options) {
  if (!(options.tolerance > 0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (options.initial_slices < 1) throw Error(ErrorCode::InvalidArgument, "slice count must be positive");
  const Expr g = slice_coefficient(spec);
  const double a = to_double(spec.from);
  const double b = to_double(spec.to);
  NumericBindings values;

  auto midpoint = [&](long n) {
    const double h = (b - a) / static_cast<double>(n);
    double total = 0;
    for (long i = 0; i < n; ++i) {
      values[spec.parameter] = a + (static_cast<double>(i) + 0.5) * h;
      double sample = evaluate(g, values);
      if (!std::isfinite(sample)) {
        throw Error(ErrorCode::SingularIntegrand, "the integrand is not finite at " + spec.parameter + " = " +
                                                      std::to_string(values[spec.parameter]));
      }
      total += sample;
    }
    return total * h;
  };

  long n = options.initial_slices;
  double coarse = midpoint(n);
  std::optional<double> previous;
  for (int doubling = 1; doubling <= options.max_doublings; ++doubling) {
    n *= 2;
    double fine = midpoint(n);
    double extrapolated = (4 * fine - coarse) / 3;
    if (previous && std::fabs(extrapolated - *previous) <= options.tolerance) {
      return SumResult{extrapolated, n, std::fabs(extrapolated - *previous)};
    }
    previous = extrapolated;
    coarse = fine;
  }
  throw Error(ErrorCode::NoConvergence,
              "no convergence after " + std::to_string(options.max_doublings) + " doublings");
}

}  // namespace leibniz
