#include "properties.hpp"

#include "generators.hpp"
#include "oracles.hpp"

#include "leibniz/differentiation.hpp"
#include "leibniz/evaluate.hpp"
#include "leibniz/format.hpp"
#include "leibniz/hyperreal.hpp"
#include "leibniz/parser.hpp"
#include "leibniz/solver.hpp"
#include "leibniz/summation.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <functional>
#include <sstream>

namespace leibniz::testing {

void SuiteResult::fail(const std::string& why) {
  if (failures++ == 0) first_failure = why;
}

std::string SuiteResult::summary() const {
  std::ostringstream out;
  out << name << ": " << cases << " cases";
  if (skipped) out << " (" << skipped << " skipped)";
  out << ", " << failures << " failures";
  if (cases < required) out << ", needs " << required;
  if (failures) out << "; first: " << first_failure;
  return out.str();
}

namespace {

std::string show(const Expr& e) { return format_expr(e); }

std::string mismatch(const Expr& got, const Expr& want) { return show(got) + " vs " + show(want); }

// Runs `body` until `target` cases have been counted, drawing at most
// 20 * target attempts. A body returns false to skip the draw.
SuiteResult run_suite(const std::string& name, int target, const std::function<bool(SuiteResult&)>& body) {
  SuiteResult r;
  r.name = name;
  r.required = target;
  for (int attempt = 0; r.cases < target && attempt < 20 * target; ++attempt) {
    try {
      if (body(r)) {
        ++r.cases;
      } else {
        ++r.skipped;
      }
    } catch (const Error& e) {
      ++r.cases;
      r.fail(std::string("unexpected ") + std::string(code_name(e.code())) + ": " + e.what());
    }
  }
  return r;
}

Expr dx_coefficient(const Expr& form, const std::string& var) {
  DifferentialMonomialForm m = monomial_form(form);
  auto it = m.find(dvar(var));
  return it == m.end() ? num(0) : it->second;
}

double eval_at(const Expr& e, const NumericBindings& b) {
  try {
    return evaluate(e, b);
  } catch (const Error&) {
    return std::nan("");
  }
}

bool usable(double v) { return std::isfinite(v) && std::fabs(v) < 1e8; }

// Window on which two truncated series are both known.
int shared_window(const Hyperreal& a, const Hyperreal& b) {
  int w = std::min(a.order(), b.order()) + 1;
  if (a.precision()) w = std::min(w, *a.precision());
  if (b.precision()) w = std::min(w, *b.precision());
  return w;
}

bool agree_below(const Hyperreal& a, const Hyperreal& b, int window, std::string& why) {
  std::set<int> exponents;
  for (const auto& [k, c] : a.coefficients()) exponents.insert(k);
  for (const auto& [k, c] : b.coefficients()) exponents.insert(k);
  for (int k : exponents) {
    if (k >= window) break;
    Scalar ca = a.coefficient(k);
    Scalar cb = b.coefficient(k);
    if (!ca.is_exact() || !cb.is_exact() || ca.exact() != cb.exact()) {
      why = "coefficient of eps^" + std::to_string(k) + ": " + ca.str() + " vs " + cb.str() + " (" + a.str() + " | " +
            b.str() + ")";
      return false;
    }
  }
  return true;
}

// F(x, y) = k built from a few monomials, always involving both symbols.
Equation two_symbol_equation(Gen& g) {
  Expr x = sym("x");
  Expr y = sym("y");
  std::vector<Expr> terms;
  terms.push_back(Expr::number(g.nonzero_rational()) * pow(x, g.integer(1, 3)) * pow(y, g.integer(0, 2)));
  terms.push_back(Expr::number(g.nonzero_rational()) * pow(y, g.integer(1, 3)) * pow(x, g.integer(0, 2)));
  for (long i = g.integer(0, 2); i > 0; --i) {
    switch (g.integer(0, 3)) {
      case 0: terms.push_back(Expr::number(g.nonzero_rational()) * pow(x, g.integer(0, 3)) * pow(y, g.integer(0, 3))); break;
      case 1: terms.push_back(Expr::number(g.nonzero_rational()) * Expr::apply(Function::Sin, x) * y); break;
      case 2: terms.push_back(Expr::number(g.nonzero_rational()) * Expr::apply(Function::Exp, y) * x); break;
      default: terms.push_back(Expr::number(g.nonzero_rational()) * Expr::apply(Function::Cos, x * y)); break;
    }
  }
  return Equation(Expr::sum(terms), Expr::number(g.rational()));
}

// Random potential built from pieces the antidifferential's rules cover.
Expr potential(Gen& g, const std::vector<std::string>& symbols) {
  std::vector<Expr> terms;
  for (long n = g.integer(1, 3); n > 0; --n) {
    Expr c = Expr::number(g.nonzero_rational(5, 3));
    // u and v differ: x*cos(x) would need integration by parts.
    std::size_t i = static_cast<std::size_t>(g.integer(0, static_cast<long>(symbols.size()) - 1));
    std::size_t j = (i + static_cast<std::size_t>(g.integer(1, static_cast<long>(symbols.size()) - 1))) % symbols.size();
    Expr u = sym(symbols[i]);
    Expr v = sym(symbols[j]);
    Expr lin = Expr::number(g.nonzero_rational(3, 2)) * u + Expr::number(g.rational(3, 2));
    switch (g.integer(0, 7)) {
      case 0:
      case 1: {
        Expr m = c;
        for (const auto& s : symbols) m = m * pow(sym(s), g.integer(0, 3));
        terms.push_back(m);
        break;
      }
      case 2: terms.push_back(c * Expr::apply(Function::Sin, lin)); break;
      case 3: terms.push_back(c * Expr::apply(Function::Exp, lin)); break;
      case 4: terms.push_back(c * v * Expr::apply(Function::Cos, u)); break;
      case 5: terms.push_back(c * u * v); break;
      case 6: terms.push_back(c * pow(lin, g.integer(2, 4))); break;
      default: terms.push_back(c * Expr::apply(Function::Exp, v) * u); break;
    }
  }
  return Expr::sum(terms);
}

// Single-variable potential that is smooth on [-1, 2].
Expr interval_potential(Gen& g) {
  Expr x = sym("x");
  std::vector<Expr> terms;
  for (long n = g.integer(1, 3); n > 0; --n) {
    Expr c = Expr::number(g.nonzero_rational(4, 3));
    Expr lin = Expr::number(g.nonzero_rational(2, 2)) * x + Expr::number(g.rational(2, 2));
    switch (g.integer(0, 6)) {
      case 0: terms.push_back(c * pow(x, g.integer(1, 5))); break;
      case 1: terms.push_back(c * Expr::apply(Function::Sin, lin)); break;
      case 2: terms.push_back(c * Expr::apply(Function::Cos, lin)); break;
      case 3: terms.push_back(c * Expr::apply(Function::Exp, lin)); break;
      case 4: terms.push_back(c * Expr::apply(Function::Sqrt, x + num(3))); break;
      case 5: terms.push_back(c * Expr::apply(Function::Ln, x + num(2))); break;
      default: terms.push_back(c * pow(lin, g.integer(2, 4))); break;
    }
  }
  return Expr::sum(terms);
}

PathPoint random_point(Gen& g, const std::vector<std::string>& symbols) {
  PathPoint p;
  for (const auto& s : symbols) p[s] = g.rational(8, 4);
  return p;
}

}  // namespace

SuiteResult differential_linearity(std::uint64_t seed) {
  Gen g(seed);
  ExprShape shape;
  shape.abs = false;
  shape.max_depth = 4;
  shape.max_nodes = 60;
  return run_suite("differential linearity", 100, [&](SuiteResult& r) {
    Expr u = g.expr(shape);
    Expr v = g.expr(shape);
    Expr a = Expr::number(g.rational());
    Expr b = Expr::number(g.rational());
    Expr lhs = differential(a * u + b * v);
    Expr rhs = a * differential(u) + b * differential(v);
    if (lhs != rhs) r.fail(mismatch(lhs, rhs));
    return true;
  });
}

SuiteResult product_rule_symmetry(std::uint64_t seed) {
  Gen g(seed);
  ExprShape shape;
  shape.abs = false;
  shape.max_depth = 4;
  shape.max_nodes = 60;
  return run_suite("product-rule symmetry", 100, [&](SuiteResult& r) {
    Expr u = g.expr(shape);
    Expr v = g.expr(shape);
    Expr uv = differential(Expr::raw_product({u, v}));
    Expr vu = differential(Expr::raw_product({v, u}));
    if (uv != vu) r.fail(mismatch(uv, vu));
    Expr expanded = u * differential(v) + v * differential(u);
    if (!is_zero(uv - expanded)) r.fail("d(u*v) != u*dv + v*du for " + show(u) + ", " + show(v));
    return true;
  });
}

SuiteResult normalize_idempotence(std::uint64_t seed) {
  Gen g(seed);
  ExprShape shape;
  shape.differentials = true;
  return run_suite("normalize idempotence", 100, [&](SuiteResult& r) {
    Expr raw = g.raw_rational_expr({"x", "y", "z"}, 5);
    Expr once;
    try {
      once = normalize(raw);
    } catch (const Error&) {
      return false;
    }
    if (normalize(once) != once) r.fail(mismatch(normalize(once), once));
    Expr e = g.expr(shape);
    if (normalize(e) != e) r.fail(mismatch(normalize(e), e));
    return true;
  });
}

SuiteResult parser_round_trip(std::uint64_t seed) {
  Gen g(seed);
  ExprShape shape;
  shape.differentials = true;
  return run_suite("parser round trip", 100, [&](SuiteResult& r) {
    Expr e = g.expr(shape);
    std::string text = format_expr(e);
    Expr back;
    try {
      back = parse_expr(text);
    } catch (const ParseError& err) {
      r.fail("'" + text + "' does not parse: " + err.what());
      return true;
    }
    if (back != e) r.fail("'" + text + "' parses to '" + show(back) + "'");
    return true;
  });
}

SuiteResult hyperreal_field_laws(std::uint64_t seed) {
  Gen g(seed);
  return run_suite("hyperreal field laws", 100, [&](SuiteResult& r) {
    Hyperreal a = g.hyperreal(-2, 3);
    Hyperreal b = g.hyperreal(-2, 3);
    Hyperreal c = g.hyperreal(-2, 3);
    std::string why;
    Hyperreal l1 = (a + b) + c;
    Hyperreal r1 = a + (b + c);
    if (!agree_below(l1, r1, shared_window(l1, r1), why)) r.fail("associativity: " + why);
    Hyperreal l2 = a * (b + c);
    Hyperreal r2 = a * b + a * c;
    if (!agree_below(l2, r2, shared_window(l2, r2), why)) r.fail("distributivity: " + why);
    if (!a.is_exact_zero()) {
      Hyperreal one = a * a.inverse();
      Hyperreal unit(Scalar(Rational(1)));
      if (!agree_below(one, unit, shared_window(one, unit), why)) r.fail("inverse: " + why);
      if (shared_window(one, unit) <= 0) r.fail("inverse lost every coefficient of " + a.str());
    }
    return true;
  });
}

SuiteResult std_part_homomorphism(std::uint64_t seed) {
  Gen g(seed);
  return run_suite("std_part homomorphism", 100, [&](SuiteResult& r) {
    Hyperreal a = Hyperreal(Scalar(g.nonzero_rational())) + g.hyperreal(1, 4);
    Hyperreal b = Hyperreal(Scalar(g.nonzero_rational())) + g.hyperreal(1, 4);
    Rational sa = std_part(a).value.exact();
    Rational sb = std_part(b).value.exact();
    LimitResult sum = std_part(a + b);
    LimitResult product = std_part(a * b);
    if (!sum.is_finite() || sum.value.exact() != sa + sb) r.fail("std(a+b) for " + a.str() + ", " + b.str());
    if (!product.is_finite() || product.value.exact() != sa * sb) r.fail("std(a*b) for " + a.str() + ", " + b.str());
    return true;
  });
}

SuiteResult solver_polynomial_oracle(std::uint64_t seed) {
  Gen g(seed);
  RatioTarget target = RatioTarget::parse("dy/dx");
  return run_suite("solver vs polynomial derivative", 100, [&](SuiteResult& r) {
    Poly p = g.poly(5);
    Solution s = solve_for_ratio({Equation(sym("y"), p.to_expr("x"))}, target);
    Expr want = p.derivative().to_expr("x");
    if (s.value != want) r.fail(mismatch(s.value, want));
    if (!s.side_conditions.empty()) r.fail("explicit case produced side conditions");
    return true;
  });
}

SuiteResult inverse_ratio_product(std::uint64_t seed) {
  Gen g(seed);
  RatioTarget dydx = RatioTarget::parse("dy/dx");
  RatioTarget dxdy = RatioTarget::parse("dx/dy");
  return run_suite("inverse-ratio product", 100, [&](SuiteResult& r) {
    Equation eq = two_symbol_equation(g);
    Expr forward = solve_for_ratio({eq}, dydx).value;
    Expr backward = solve_for_ratio({eq}, dxdy).value;
    int checked = 0;
    for (int i = 0; i < 8 && checked < 5; ++i) {
      NumericBindings at{{"x", g.real(0.3, 2.5)}, {"y", g.real(0.3, 2.5)}};
      double f = eval_at(forward, at);
      double b = eval_at(backward, at);
      if (!usable(f) || !usable(b) || std::fabs(f) < 1e-6 || std::fabs(b) < 1e-6) continue;
      ++checked;
      if (relative_error(f * b, 1.0) > 1e-10) {
        r.fail(format_equation(eq) + ": (" + show(forward) + ") * (" + show(backward) + ") = " + std::to_string(f * b));
      }
    }
    return checked > 0;
  });
}

SuiteResult product_to_sum_identity(std::uint64_t seed) {
  Gen g(seed);
  Expr x = sym("x");
  return run_suite("product-to-sum identity", 100, [&](SuiteResult& r) {
    std::vector<Expr> factors;
    for (long n = g.integer(2, 5); n > 0; --n) {
      Rational a(g.integer(1, 5), g.integer(1, 3));
      Rational b(g.integer(1, 5), g.integer(1, 3));
      switch (g.integer(0, 6)) {
        case 0: factors.push_back(pow(x, g.integer(1, 3))); break;
        case 1: factors.push_back(Expr::apply(Function::Exp, Expr::number(g.nonzero_rational(3, 2)) * x)); break;
        case 2: factors.push_back(pow(x, 2) + Expr::number(a)); break;
        case 3: factors.push_back(Expr::apply(Function::Sqrt, x + Expr::number(b))); break;
        case 4: factors.push_back(Expr::number(a) * x + Expr::number(b)); break;
        case 5: factors.push_back(Expr::apply(Function::Cos, x) + num(2)); break;
        default: factors.push_back(Expr::apply(Function::Ln, x + num(2))); break;
      }
    }
    Expr product = Expr::product(factors);
    Expr lhs = differential(product);
    std::vector<Expr> logs;
    for (const Expr& f : factors) logs.push_back(differential(Expr::apply(Function::Ln, f)));
    Expr rhs = product * Expr::sum(logs);
    for (int i = 0; i < 5; ++i) {
      NumericBindings at{{"x", g.real(0.2, 3.0)}, {"dx", 1.0}};
      double l = eval_at(lhs, at);
      double rr = eval_at(rhs, at);
      if (!std::isfinite(l) || !std::isfinite(rr) || relative_error(l, rr) > 1e-10) {
        r.fail("d(" + show(product) + ") at x = " + std::to_string(at["x"]) + ": " + std::to_string(l) + " vs " +
               std::to_string(rr));
      }
    }
    return true;
  });
}

SuiteResult antidifferential_round_trip(std::uint64_t seed) {
  Gen g(seed);
  std::vector<std::string> symbols{"x", "y", "z"};
  return run_suite("antidifferential round trip", 100, [&](SuiteResult& r) {
    Expr form = differential(potential(g, symbols));
    if (form.is_zero()) return false;
    Potential p;
    try {
      p = antidifferential(DifferentialForm(form));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Unmatched) return false;
      throw;
    }
    Expr back = differential(p.expr);
    if (back != form) r.fail(mismatch(back, form));
    return true;
  });
}

SuiteResult fundamental_theorem(std::uint64_t seed) {
  Gen g(seed);
  return run_suite("fundamental theorem", 100, [&](SuiteResult& r) {
    Expr form = differential(interval_potential(g));
    if (form.is_zero()) return false;
    Potential p = antidifferential(DifferentialForm(form));
    Rational a = g.rational_in(-1, 1);
    Rational b = g.rational_in(0, 2);
    if (a == b) return false;
    double exact = total_difference(p, {{"x", a}}, {{"x", b}}).to_double();
    SumOptions options;
    SumResult s = infinite_sum(SumSpec{form, "x", a, b, std::nullopt}, options);
    double bound = std::max(options.tolerance, 1e-8);
    if (std::fabs(s.value - exact) > bound) {
      r.fail(show(form) + " on [" + to_string(a) + ", " + to_string(b) + "]: " + std::to_string(s.value) + " vs " +
             std::to_string(exact));
    }
    return true;
  });
}

SuiteResult value_preservation(std::uint64_t seed) {
  Gen g(seed);
  return run_suite("normalize preserves value", 100, [&](SuiteResult& r) {
    Expr raw = g.raw_rational_expr({"x", "y"}, 4);
    Expr n;
    try {
      n = normalize(raw);
    } catch (const Error&) {
      return false;
    }
    int checked = 0;
    for (int i = 0; i < 5; ++i) {
      ExactBindings at{{"x", g.nonzero_rational(7, 5)}, {"y", g.nonzero_rational(7, 5)}};
      auto before = evaluate_exact(raw, at);
      if (!before) continue;
      ++checked;
      auto after = evaluate_exact(n, at);
      if (!after || *after != *before) r.fail(show(raw) + " -> " + show(n));
    }
    return checked > 0;
  });
}

SuiteResult substitution_composes(std::uint64_t seed) {
  Gen g(seed);
  ExprShape outer;
  outer.max_depth = 4;
  outer.max_nodes = 40;
  outer.functions = false;
  ExprShape inner = outer;
  inner.max_depth = 2;
  inner.symbols = {"y", "z"};
  ExprShape last = inner;
  last.symbols = {"z", "w"};
  return run_suite("substitution composes", 100, [&](SuiteResult& r) {
    Expr e = g.expr(outer);
    Bindings sigma{{sym("x"), g.expr(inner)}};
    Bindings tau{{sym("y"), g.expr(last)}};
    Expr left;
    Expr right;
    try {
      left = substitute(substitute(e, sigma), tau);
      Bindings composed{{sym("x"), substitute(sigma.at(sym("x")), tau)}, {sym("y"), tau.at(sym("y"))}};
      right = substitute(e, composed);
    } catch (const Error&) {
      return false;
    }
    if (left != right && !is_zero(left - right)) r.fail(mismatch(left, right));
    return true;
  });
}

SuiteResult json_round_trip(std::uint64_t seed) {
  Gen g(seed);
  ExprShape shape;
  shape.differentials = true;
  return run_suite("JSON round trip", 100, [&](SuiteResult& r) {
    Expr e = g.expr(shape);
    Expr back = from_json(nlohmann::json::parse(to_json(e).dump()));
    if (back != e) r.fail(mismatch(back, e));
    return true;
  });
}

SuiteResult parse_error_spans(std::uint64_t seed) {
  Gen g(seed);
  ExprShape shape;
  shape.differentials = true;
  shape.max_depth = 4;
  return run_suite("parse error spans", 100, [&](SuiteResult& r) {
    std::string text = format_expr(g.expr(shape));
    std::size_t at = static_cast<std::size_t>(g.integer(0, static_cast<long>(text.size())));
    text.insert(at, "#");
    try {
      parse_expr(text);
      r.fail("'" + text + "' parsed");
    } catch (const ParseError& e) {
      if (e.span().start != at || e.span().end > text.size() || e.span().end <= e.span().start) {
        r.fail("'" + text + "' reported [" + std::to_string(e.span().start) + ", " + std::to_string(e.span().end) +
               "), expected start " + std::to_string(at));
      }
    }
    return true;
  });
}

SuiteResult finite_difference_oracle(std::uint64_t seed) {
  Gen g(seed);
  return run_suite("differential vs central differences", 100, [&](SuiteResult& r) {
    Expr f = g.smooth("x", 3);
    Expr slope = dx_coefficient(differential(f), "x");
    int checked = 0;
    for (int i = 0; i < 6; ++i) {
      double x0 = g.real(-2, 2);
      auto fx = [&](double x) { return eval_at(f, {{"x", x}}); };
      double numeric = central_difference(fx, x0, 1e-6);
      double symbolic = eval_at(slope, {{"x", x0}});
      if (!usable(numeric) || !usable(symbolic) || std::fabs(fx(x0)) > 1e4) continue;
      ++checked;
      if (std::fabs(numeric - symbolic) / std::max({std::fabs(numeric), std::fabs(symbolic), 1.0}) > 1e-6) {
        r.fail("d(" + show(f) + ") at " + std::to_string(x0) + ": " + std::to_string(symbolic) + " vs " +
               std::to_string(numeric));
      }
    }
    return checked > 0;
  });
}

SuiteResult sum_of_partials(std::uint64_t seed) {
  Gen g(seed);
  Assumptions positive;
  positive.positive = {"a", "b"};
  return run_suite("sum of partials", 100, [&](SuiteResult& r) {
    Expr a = sym("a");
    Expr b = sym("b");
    Expr u = g.chance(0.5) ? Expr::number(Rational(g.integer(1, 5), g.integer(1, 3))) * pow(a, g.integer(1, 3)) + a
                           : Expr::apply(Function::Exp, Expr::number(g.nonzero_rational()) * a);
    Expr v = Expr::number(g.nonzero_rational()) * pow(b, g.integer(1, 2)) + Expr::number(g.rational());
    Expr total = differential(pow(u, v), positive);
    Expr held_v = substitute(total, {{dvar("b"), num(0)}});
    Expr held_u = substitute(total, {{dvar("a"), num(0)}});
    if (held_v + held_u != total) r.fail(mismatch(held_v + held_u, total));
    Expr du = differential(u, positive);
    Expr dv = differential(v, positive);
    Expr want_v = v * pow(u, v - num(1)) * du;
    Expr want_u = Expr::apply(Function::Ln, u) * pow(u, v) * dv;
    if (!is_zero(held_v - want_v)) r.fail("partial with v held: " + mismatch(held_v, want_v));
    if (!is_zero(held_u - want_u)) r.fail("partial with u held: " + mismatch(held_u, want_u));
    return true;
  });
}

SuiteResult implicit_consistency(std::uint64_t seed) {
  Gen g(seed);
  Solution s = solve_for_ratio({parse_equation("x*y = 5")}, RatioTarget::parse("dy/dx"));
  return run_suite("implicit consistency x*y = 5", 100, [&](SuiteResult& r) {
    Rational x = g.nonzero_rational(20, 7);
    auto got = evaluate_exact(s.value, {{"x", x}, {"y", Rational(5) / x}});
    Rational want = Rational(-5) / (x * x);
    if (!got || *got != want) r.fail("at x = " + to_string(x));
    return true;
  });
}

SuiteResult partial_degeneracy(std::uint64_t seed) {
  Gen g(seed);
  RatioTarget target = RatioTarget::parse("dy/dx");
  return run_suite("partial with nothing held", 100, [&](SuiteResult& r) {
    Equation eq = two_symbol_equation(g);
    Expr total = solve_for_ratio({eq}, target).value;
    Expr partial = partial_ratio(eq, target, {}).value;
    if (total != partial) r.fail(format_equation(eq) + ": " + mismatch(partial, total));
    return true;
  });
}

SuiteResult second_derivative_reduction(std::uint64_t seed) {
  Gen g(seed);
  Assumptions independent;
  independent.independent = {"x"};
  return run_suite("second derivative reduction", 100, [&](SuiteResult& r) {
    Poly p = g.poly(5);
    Equation eq(sym("y"), p.to_expr("x"));
    SecondDerivative s = second_derivative({eq}, "y", "x", independent);
    Expr w = solve_for_ratio({eq}, RatioTarget::parse("dy/dx"), independent).value;
    Expr twice = solve_for_ratio({eq, Equation(sym("w"), w)}, RatioTarget::parse("dw/dx"), independent).value;
    if (s.value != twice) r.fail(mismatch(s.value, twice));
    Expr oracle = p.derivative().derivative().to_expr("x");
    if (s.value != oracle) r.fail("oracle: " + mismatch(s.value, oracle));
    return true;
  });
}

SuiteResult limit_numeric_agreement() {
  struct Case {
    const char* text;
    Rational point;
  };
  const std::vector<Case> corpus = {
      {"(x^2 - 25)/(x - 5)", 5},        {"sin(x)/x", 0},
      {"(1 - cos(x))/x^2", 0},          {"(exp(x) - 1)/x", 0},
      {"(x^3 - 8)/(x - 2)", 2},         {"(sqrt(x + 4) - 2)/x", 0},
      {"tan(x)/x", 0},                  {"(x^2 - 1)/(x^2 + x - 2)", 1},
      {"x^2 + 3*x", Rational(1, 3)},    {"ln(1 + x)/x", 0},
      {"(exp(2*x) - 1)/sin(x)", 0},     {"(x^2 - 4)/(x + 2)", -2},
      {"cos(x)", Rational(1, 2)},       {"(sqrt(x) - 3)/(x - 9)", 9},
      {"(x^4 - 16)/(x - 2)", 2},        {"x/(sqrt(1 + x) - 1)", 0},
  };
  SuiteResult r;
  r.name = "limit vs numeric probing";
  r.required = static_cast<int>(corpus.size());
  for (const Case& c : corpus) {
    ++r.cases;
    try {
      Expr e = parse_expr(c.text);
      LimitResult lim = limit(e, "x", LimitPoint::at(c.point), Side::Both);
      if (!lim.is_finite()) {
        r.fail(std::string(c.text) + ": " + lim.str());
        continue;
      }
      for (double side : {-1e-6, 1e-6}) {
        double probe = evaluate(e, {{"x", to_double(c.point) + side}});
        if (relative_error(probe, lim.value.to_double(), 1e-12) > 1e-4) {
          r.fail(std::string(c.text) + ": " + lim.str() + " vs probe " + std::to_string(probe));
        }
      }
    } catch (const Error& e) {
      r.fail(std::string(c.text) + ": " + e.what());
    }
  }
  return r;
}

SuiteResult slope_matches_differential(std::uint64_t seed) {
  Gen g(seed);
  return run_suite("slope_at vs differential", 20, [&](SuiteResult& r) {
    Poly p = g.poly(5);
    Expr f = p.to_expr("x");
    Rational a = g.rational(5, 4);
    LimitResult slope = slope_at(f, "x", a);
    auto want = evaluate_exact(dx_coefficient(differential(f), "x"), {{"x", a}});
    if (!slope.is_finite() || !slope.value.is_exact() || !want || slope.value.exact() != *want) {
      r.fail(show(f) + " at " + to_string(a) + ": " + slope.str());
    }
    return true;
  });
}

SuiteResult path_independence(std::uint64_t seed) {
  Gen g(seed);
  std::vector<std::string> symbols{"x", "y"};
  return run_suite("path independence", 100, [&](SuiteResult& r) {
    Expr form = r.cases == 0 ? parse_expr("dy + dx") : differential(potential(g, symbols));
    if (form.is_zero()) return false;
    Potential p = antidifferential(DifferentialForm(form));
    PathPoint a = random_point(g, symbols);
    PathPoint b = random_point(g, symbols);
    PathPoint corner1{{"x", b.at("x")}, {"y", a.at("y")}};
    PathPoint corner2{{"x", a.at("x")}, {"y", b.at("y")}};
    Scalar via1 = total_difference(p, a, corner1) + total_difference(p, corner1, b);
    Scalar via2 = total_difference(p, a, corner2) + total_difference(p, corner2, b);
    if (via1.is_exact() && via2.is_exact()) {
      if (via1.exact() != via2.exact()) r.fail(show(form) + ": " + via1.str() + " vs " + via2.str());
    } else if (relative_error(via1.to_double(), via2.to_double(), 1.0) > 1e-12) {
      r.fail(show(form) + ": " + via1.str() + " vs " + via2.str());
    }
    return true;
  });
}

SuiteResult total_difference_additivity(std::uint64_t seed) {
  Gen g(seed);
  std::vector<std::string> symbols{"x", "y", "z"};
  return run_suite("total difference additivity", 100, [&](SuiteResult& r) {
    Expr form = differential(potential(g, symbols));
    if (form.is_zero()) return false;
    Potential p = antidifferential(DifferentialForm(form));
    PathPoint a = random_point(g, symbols);
    PathPoint b = random_point(g, symbols);
    PathPoint c = random_point(g, symbols);
    Scalar split = total_difference(p, a, b) + total_difference(p, b, c);
    Scalar whole = total_difference(p, a, c);
    if (split.is_exact() != whole.is_exact()) {
      r.fail(show(form) + ": exactness differs");
    } else if (split.is_exact() ? split.exact() != whole.exact()
                                : relative_error(split.to_double(), whole.to_double(), 1.0) > 1e-12) {
      r.fail(show(form) + ": " + split.str() + " vs " + whole.str());
    }
    return true;
  });
}

}  // namespace leibniz::testing
