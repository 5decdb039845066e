// Canonical-form constructors for Sum, Product, Power and Function nodes.
//
// Normal form summary:
//  - sums and products are flat, constant-folded and sorted; sum terms are
//    ordered by their coefficient-free part, product factors by compare().
//  - like terms in a sum collect their rational coefficients; like bases in a
//    product collect their exponents.
//  - products of sums (including positive integer powers of sums) are
//    multiplied out when any factor carries a differential or when the
//    estimated degree is at most kExpansionDegree.

#include "leibniz/error.hpp"
#include "leibniz/expr.hpp"
#include "node.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

namespace leibniz {

using detail::Node;

namespace {

constexpr long kExpansionDegree = 4;
// Larger integer exponents are kept symbolic rather than folded or expanded.
constexpr long kMaxFoldExponent = 1024;
constexpr long kMaxExpandExponent = 32;

bool is_positive_integer_power_of_sum(const Expr& e) {
  return e.is(Kind::Power) && e.base().is(Kind::Sum) && e.exponent().is_integer() && e.exponent().value() > 0 &&
         e.exponent().value() <= kMaxExpandExponent;
}

bool is_reciprocal_of_sum(const Expr& e) {
  return e.is(Kind::Power) && e.base().is(Kind::Sum) && e.exponent().is_number() && e.exponent().value() < 0;
}

Expr with_coefficient(const Rational& c, const Expr& rest) {
  if (c == 1) return rest;
  if (rest.is_one()) return Expr::number(c);
  std::vector<Expr> factors{Expr::number(c)};
  if (rest.is(Kind::Product)) {
    factors.insert(factors.end(), rest.operands().begin(), rest.operands().end());
  } else {
    factors.push_back(rest);
  }
  return Expr::raw_product(std::move(factors));
}

// Splits a sum into content * primitive, where the primitive sum has coprime
// integer coefficients and a positive coefficient on its last term.
std::pair<Rational, Expr> primitive_part(const Expr& sum) {
  Integer num_gcd = 0;
  Integer den_lcm = 1;
  Rational last = 1;
  for (const Expr& t : sum.operands()) {
    Rational c = split_coefficient(t).first;
    num_gcd = boost::multiprecision::gcd(num_gcd, numerator(c));
    den_lcm = boost::multiprecision::lcm(den_lcm, denominator(c));
    last = c;
  }
  Rational content(num_gcd, den_lcm);
  if (last < 0) content = -content;
  if (content == 1) return {content, sum};
  std::vector<Expr> terms;
  for (const Expr& t : sum.operands()) {
    auto [c, rest] = split_coefficient(t);
    terms.push_back(with_coefficient(c / content, rest));
  }
  return {content, Expr::sum(std::move(terms))};
}

// Distributes a product over its sum factors. Factors must be normalized.
Expr multiply_out(const Rational& coefficient, const std::vector<Expr>& factors) {
  std::vector<Expr> terms{Expr::number(coefficient)};
  auto times = [&terms](const std::vector<Expr>& addends) {
    std::vector<Expr> next;
    next.reserve(terms.size() * addends.size());
    for (const Expr& t : terms) {
      for (const Expr& a : addends) next.push_back(Expr::product({t, a}));
    }
    terms = std::move(next);
  };
  for (const Expr& f : factors) {
    if (f.is(Kind::Sum)) {
      times({f.operands().begin(), f.operands().end()});
    } else if (is_positive_integer_power_of_sum(f)) {
      std::vector<Expr> addends(f.base().operands().begin(), f.base().operands().end());
      long n = f.exponent().value().convert_to<long>();
      for (long i = 0; i < n; ++i) times(addends);
    } else {
      times({f});
    }
  }
  return Expr::sum(std::move(terms));
}

}  // namespace

long degree(const Expr& e) {
  switch (e.kind()) {
    case Kind::Number:
    case Kind::Constant:
      return 0;
    case Kind::Symbol:
    case Kind::Differential:
    case Kind::Function:
      return 1;
    case Kind::Operator:
      return degree(e.argument());
    case Kind::Power: {
      const Expr& x = e.exponent();
      if (x.is_integer()) {
        auto n = to_long(numerator(x.value()));
        if (n) return std::labs(*n) * degree(e.base());
        return kMaxFoldExponent;
      }
      return std::max<long>(1, degree(e.base()));
    }
    case Kind::Product: {
      long total = 0;
      for (const Expr& f : e.operands()) total += degree(f);
      return total;
    }
    case Kind::Sum: {
      long best = 0;
      for (const Expr& t : e.operands()) best = std::max(best, degree(t));
      return best;
    }
  }
  return 0;
}

Expr Expr::sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  flat.reserve(terms.size());
  for (Expr& t : terms) {
    if (t.is(Kind::Sum)) {
      flat.insert(flat.end(), t.operands().begin(), t.operands().end());
    } else {
      flat.push_back(std::move(t));
    }
  }

  Rational constant = 0;
  std::map<Expr, Rational> collected;
  for (const Expr& t : flat) {
    if (t.is_number()) {
      constant += t.value();
      continue;
    }
    auto [c, rest] = split_coefficient(t);
    collected[rest] += c;
  }

  std::vector<Expr> out;
  if (constant != 0) out.push_back(Expr::number(constant));
  for (const auto& [rest, c] : collected) {
    if (c != 0) out.push_back(with_coefficient(c, rest));
  }
  if (out.empty()) return Expr();
  if (out.size() == 1) return out.front();
  return Expr::raw_sum(std::move(out));
}

Expr Expr::product(std::vector<Expr> factors) {
  Rational coefficient = 1;
  std::vector<Expr> flat;
  flat.reserve(factors.size());
  for (Expr& f : factors) {
    if (f.is_number()) {
      coefficient *= f.value();
    } else if (f.is(Kind::Product)) {
      for (const Expr& g : f.operands()) {
        if (g.is_number()) {
          coefficient *= g.value();
        } else {
          flat.push_back(g);
        }
      }
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (coefficient == 0) return Expr();

  std::map<Expr, std::vector<Expr>> by_base;
  for (const Expr& f : flat) {
    if (f.is(Kind::Power)) {
      by_base[f.base()].push_back(f.exponent());
    } else {
      by_base[f].push_back(Expr::integer(1));
    }
  }

  std::vector<Expr> combined;
  bool reshaped = false;
  for (auto& [base, exponents] : by_base) {
    Expr p = exponents.size() == 1 && exponents.front().is_one()
                 ? base
                 : Expr::power(base, Expr::sum(std::move(exponents)));
    if (p.is_number()) {
      coefficient *= p.value();
    } else if (p.is(Kind::Product)) {
      reshaped = true;
      combined.push_back(std::move(p));
    } else {
      combined.push_back(std::move(p));
    }
  }
  if (coefficient == 0) return Expr();
  if (reshaped) {
    combined.push_back(Expr::number(coefficient));
    return Expr::product(std::move(combined));
  }

  std::sort(combined.begin(), combined.end(), [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });

  bool has_sum_factor = std::any_of(combined.begin(), combined.end(), [](const Expr& f) {
    return f.is(Kind::Sum) || is_positive_integer_power_of_sum(f);
  });
  if (has_sum_factor && (combined.size() > 1 || coefficient != 1)) {
    bool differential = std::any_of(combined.begin(), combined.end(), [](const Expr& f) { return f.has_differential(); });
    long total = 0;
    for (const Expr& f : combined) total += degree(f);
    if (differential || total <= kExpansionDegree) {
      std::vector<Expr> numer;
      std::vector<Expr> denom;
      for (const Expr& f : combined) (is_reciprocal_of_sum(f) ? denom : numer).push_back(f);
      Expr expanded = multiply_out(coefficient, numer);
      if (denom.empty()) return expanded;
      // Keep a multiplied-out numerator over sum denominators as one term
      // rather than distributing it into one fraction per addend.
      if (!expanded.is(Kind::Sum)) {
        denom.push_back(expanded);
        return Expr::product(std::move(denom));
      }
      auto [content, primitive] = primitive_part(expanded);
      denom.push_back(primitive);
      std::sort(denom.begin(), denom.end(), [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
      if (content != 1) denom.insert(denom.begin(), Expr::number(content));
      return Expr::raw_product(std::move(denom));
    }
  }

  if (combined.empty()) return Expr::number(coefficient);
  if (combined.size() == 1 && coefficient == 1) return combined.front();
  if (coefficient != 1) combined.insert(combined.begin(), Expr::number(coefficient));
  return Expr::raw_product(std::move(combined));
}

Expr Expr::power(Expr base, Expr exponent) {
  if (exponent.is_number()) {
    const Rational& r = exponent.value();
    if (r == 0) return Expr::integer(1);
    if (r == 1) return base;
    bool integral = leibniz::is_integer(r);
    std::optional<long> n = integral ? to_long(numerator(r)) : std::nullopt;

    if (base.is_number()) {
      const Rational& b = base.value();
      if (b == 0) {
        if (r < 0) throw Error(ErrorCode::DegenerateExpression, "division by zero");
        return Expr();
      }
      if (b == 1) return base;
      if (n && std::labs(*n) <= kMaxFoldExponent) return Expr::number(leibniz::pow(b, *n));
      if (!integral && b > 0) {
        auto q = to_long(denominator(r));
        auto p = to_long(numerator(r));
        if (q && p && *q <= 64 && std::labs(*p) <= kMaxFoldExponent) {
          if (auto root = exact_root(b, static_cast<unsigned long>(*q))) return Expr::number(leibniz::pow(*root, *p));
        }
      }
      return Expr::raw_power(std::move(base), std::move(exponent));
    }

    if (integral) {
      if (base.is(Kind::Power)) {
        return Expr::power(base.base(), Expr::product({base.exponent(), exponent}));
      }
      if (base.is(Kind::Product)) {
        std::vector<Expr> factors;
        for (const Expr& f : base.operands()) factors.push_back(Expr::power(f, exponent));
        return Expr::product(std::move(factors));
      }
      if (base.is(Kind::Function) && base.function() == Function::Abs && n && *n % 2 == 0) {
        return Expr::power(base.argument(), exponent);
      }
      if (base.is(Kind::Sum) && n && std::labs(*n) > 1 && std::labs(*n) <= kMaxExpandExponent &&
          (base.has_differential() || std::labs(*n) * degree(base) <= kExpansionDegree)) {
        std::vector<Expr> copies(static_cast<std::size_t>(std::labs(*n)), base);
        Expr expanded = multiply_out(Rational(1), copies);
        // (a + b)^-2 is kept as (a^2 + 2ab + b^2)^-1, the form 1/(a + b)^2
        // normalizes to.
        return *n > 0 ? expanded : Expr::power(std::move(expanded), Expr::integer(-1));
      }
    }
    return Expr::raw_power(std::move(base), std::move(exponent));
  }

  if (base.is_one()) return base;
  if (base.is(Kind::Constant) && base.named() == NamedConstant::E && exponent.is(Kind::Function) &&
      exponent.function() == Function::Ln) {
    return exponent.argument();
  }
  return Expr::raw_power(std::move(base), std::move(exponent));
}

Expr Expr::apply(Function f, Expr argument) {
  const Expr& a = argument;
  auto is_fn = [&a](Function g) { return a.is(Kind::Function) && a.function() == g; };
  switch (f) {
    case Function::Sin:
    case Function::Tan:
      if (a.is_zero()) return Expr();
      break;
    case Function::Cos:
      if (a.is_zero()) return Expr::integer(1);
      break;
    case Function::Exp:
      if (a.is_zero()) return Expr::integer(1);
      if (is_fn(Function::Ln)) return a.argument();
      break;
    case Function::Ln:
      if (a.is_one()) return Expr();
      if (a.is(Kind::Constant) && a.named() == NamedConstant::E) return Expr::integer(1);
      if (is_fn(Function::Exp)) return a.argument();
      if (a.is(Kind::Power) && a.base().is(Kind::Constant) && a.base().named() == NamedConstant::E) return a.exponent();
      break;
    case Function::Sqrt:
      // Square roots live in the normal form as u^(1/2) so that they combine
      // with other powers of u; the printer writes them back as sqrt(u).
      return Expr::power(std::move(argument), Expr::number(Rational(1, 2)));
    case Function::Abs:
      if (a.is_number()) return Expr::number(boost::multiprecision::abs(a.value()));
      if (is_fn(Function::Abs)) return a;
      if (a.is(Kind::Constant) && (a.named() == NamedConstant::Pi || a.named() == NamedConstant::E)) return a;
      break;
  }
  return Expr::raw_apply(f, std::move(argument));
}

}  // namespace leibniz
