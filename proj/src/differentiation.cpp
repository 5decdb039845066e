#include "leibniz/differentiation.hpp"

#include "leibniz/error.hpp"
#include "leibniz/evaluate.hpp"

#include <array>

namespace leibniz {

namespace {

using RuleFn = Expr (*)(const Expr&, const Assumptions&);

Expr d(const Expr& e, const Assumptions& a);

bool is_fn(const Expr& e, Function f) { return e.is(Kind::Function) && e.function() == f; }

Expr d_constant(const Expr&, const Assumptions&) { return Expr(); }

Expr d_symbol(const Expr& e, const Assumptions&) { return Expr::differential(e.name(), 1); }

Expr d_atom(const Expr& e, const Assumptions& a) {
  if (a.independent.contains(e.name())) return Expr();
  return Expr::differential(e.name(), e.order() + 1);
}

Expr d_sum(const Expr& e, const Assumptions& a) {
  std::vector<Expr> terms;
  for (const Expr& t : e.operands()) terms.push_back(d(t, a));
  return Expr::sum(std::move(terms));
}

Expr d_product(const Expr& e, const Assumptions& a) {
  auto factors = e.operands();
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    Expr df = d(factors[i], a);
    if (df.is_zero()) continue;
    std::vector<Expr> rest;
    for (std::size_t j = 0; j < factors.size(); ++j) {
      if (j != i) rest.push_back(factors[j]);
    }
    rest.push_back(df);
    terms.push_back(Expr::product(std::move(rest)));
  }
  return Expr::sum(std::move(terms));
}

Expr d_constant_power(const Expr& e, const Assumptions& a) {
  const Expr& u = e.base();
  const Expr& c = e.exponent();
  return c * pow(u, c - num(1)) * d(u, a);
}

Expr d_general_power(const Expr& e, const Assumptions& a) {
  const Expr& u = e.base();
  const Expr& v = e.exponent();
  if (!is_known_positive(u, a)) {
    throw Error(ErrorCode::NonPositiveBase,
                "the rule for u^v with a variable exponent needs a positive base; declare the base symbols with --positive");
  }
  return v * pow(u, v - num(1)) * d(u, a) + Expr::apply(Function::Ln, u) * e * d(v, a);
}

Expr d_function(const Expr& e, const Assumptions& a) {
  const Expr& u = e.argument();
  Expr du = d(u, a);
  switch (e.function()) {
    case Function::Sin: return Expr::apply(Function::Cos, u) * du;
    case Function::Cos: return -Expr::apply(Function::Sin, u) * du;
    case Function::Tan: return pow(Expr::apply(Function::Cos, u), -2) * du;
    case Function::Exp: return e * du;
    case Function::Ln: return pow(u, -1) * du;
    case Function::Sqrt: return num(1, 2) * pow(e, -1) * du;
    case Function::Abs: break;
  }
  throw Error(ErrorCode::UnsupportedNode, "abs has no differential");
}

Expr d_abs(const Expr&, const Assumptions&) { throw Error(ErrorCode::UnsupportedNode, "abs has no differential"); }

Expr d_operator(const Expr& e, const Assumptions& a) { return d(resolve_operators(e, a), a); }

struct Rule {
  DifferentialRule doc;
  bool (*matches)(const Expr&);
  RuleFn apply;
};

const std::array<Rule, 10> kRules{{
    {{"constant", "c, any expression free of symbols and differentials", "0"},
     [](const Expr& e) { return !e.has_variable() && !e.has_operator(); },
     d_constant},
    {{"symbol", "x", "dx"}, [](const Expr& e) { return e.is(Kind::Symbol); }, d_symbol},
    {{"differential", "d^k x", "d^(k+1) x, or 0 when x is independent"},
     [](const Expr& e) { return e.is(Kind::Differential); },
     d_atom},
    {{"sum", "u + v + ...", "du + dv + ..."}, [](const Expr& e) { return e.is(Kind::Sum); }, d_sum},
    {{"product", "f1*f2*...*fn", "sum over i of (product of fj, j != i) * dfi"},
     [](const Expr& e) { return e.is(Kind::Product); },
     d_product},
    {{"power", "u^c, c free of variables", "c*u^(c-1)*du"},
     [](const Expr& e) { return e.is(Kind::Power) && !e.exponent().has_variable(); },
     d_constant_power},
    {{"general power", "u^v, u > 0", "v*u^(v-1)*du + ln(u)*u^v*dv"},
     [](const Expr& e) { return e.is(Kind::Power); },
     d_general_power},
    {{"abs", "abs(u)", "unsupported"}, [](const Expr& e) { return is_fn(e, Function::Abs); }, d_abs},
    {{"function", "sin, cos, tan, exp, ln, sqrt of u",
      "cos(u)*du, -sin(u)*du, cos(u)^-2*du, exp(u)*du, u^-1*du, 1/(2*sqrt(u))*du"},
     [](const Expr& e) { return e.is(Kind::Function); },
     d_function},
    {{"operator", "d^k(u)", "d applied to the resolved k-th differential of u"},
     [](const Expr& e) { return e.is(Kind::Operator); },
     d_operator},
}};

Expr d(const Expr& e, const Assumptions& a) {
  for (const Rule& rule : kRules) {
    if (rule.matches(e)) return rule.apply(e, a);
  }
  throw Error(ErrorCode::UnsupportedNode, "no differential rule matches");
}

Expr rebuild_resolving(const Expr& e, const Assumptions& a) {
  if (!e.has_operator()) return e;
  switch (e.kind()) {
    case Kind::Operator: {
      Expr inner = rebuild_resolving(e.argument(), a);
      return nth_differential(inner, e.order(), a);
    }
    case Kind::Sum:
    case Kind::Product: {
      std::vector<Expr> parts;
      for (const Expr& x : e.operands()) parts.push_back(rebuild_resolving(x, a));
      return e.is(Kind::Sum) ? Expr::sum(std::move(parts)) : Expr::product(std::move(parts));
    }
    case Kind::Power:
      return Expr::power(rebuild_resolving(e.base(), a), rebuild_resolving(e.exponent(), a));
    case Kind::Function:
      return Expr::apply(e.function(), rebuild_resolving(e.argument(), a));
    default:
      return e;
  }
}

}  // namespace

std::span<const DifferentialRule> differential_rules() {
  static const std::array<DifferentialRule, kRules.size()> docs = [] {
    std::array<DifferentialRule, kRules.size()> out{};
    for (std::size_t i = 0; i < kRules.size(); ++i) out[i] = kRules[i].doc;
    return out;
  }();
  return docs;
}

Expr differential(const Expr& e, const Assumptions& assumptions) {
  Expr input = resolve_operators(e, assumptions);
  return apply_independence(d(input, assumptions), assumptions);
}

Equation differential(const Equation& eq, const Assumptions& assumptions) {
  return Equation(differential(eq.lhs(), assumptions), differential(eq.rhs(), assumptions));
}

Expr nth_differential(const Expr& e, int n, const Assumptions& assumptions) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "differential order must be at least 1");
  Expr out = e;
  for (int i = 0; i < n; ++i) out = differential(out, assumptions);
  return out;
}

Equation nth_differential(const Equation& eq, int n, const Assumptions& assumptions) {
  return Equation(nth_differential(eq.lhs(), n, assumptions), nth_differential(eq.rhs(), n, assumptions));
}

Expr resolve_operators(const Expr& e, const Assumptions& assumptions) {
  return apply_independence(rebuild_resolving(e, assumptions), assumptions);
}

Equation resolve_operators(const Equation& eq, const Assumptions& assumptions) {
  return Equation(resolve_operators(eq.lhs(), assumptions), resolve_operators(eq.rhs(), assumptions));
}

}  // namespace leibniz
