#include "leibniz/evaluate.hpp"

#include "leibniz/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace leibniz {

namespace {

std::string atom_key(const Expr& e) {
  return e.is(Kind::Differential) ? e.atom().name() : e.name();
}

[[noreturn]] void unbound(const std::string& what) {
  throw Error(ErrorCode::UnboundSymbol, "no value bound for '" + what + "'");
}

double real_power(double base, const Expr& exponent, double x) {
  // Odd roots of negative numbers are real.
  if (base < 0 && exponent.is_number() && !exponent.is_integer()) {
    const Rational& r = exponent.value();
    if (denominator(r) % 2 == 1) {
      double magnitude = std::pow(-base, x);
      return numerator(r) % 2 == 0 ? magnitude : -magnitude;
    }
  }
  return std::pow(base, x);
}

}  // namespace

double evaluate(const Expr& e, const NumericBindings& bindings) {
  switch (e.kind()) {
    case Kind::Number:
      return to_double(e.value());
    case Kind::Constant:
      switch (e.named()) {
        case NamedConstant::Pi: return std::numbers::pi;
        case NamedConstant::E: return std::numbers::e;
        default: unbound(std::string(constant_name(e.named())));
      }
    case Kind::Symbol:
    case Kind::Differential: {
      auto it = bindings.find(atom_key(e));
      if (it == bindings.end()) unbound(atom_key(e));
      return it->second;
    }
    case Kind::Sum: {
      double total = 0;
      for (const Expr& t : e.operands()) total += evaluate(t, bindings);
      return total;
    }
    case Kind::Product: {
      double total = 1;
      for (const Expr& f : e.operands()) total *= evaluate(f, bindings);
      return total;
    }
    case Kind::Power: {
      double b = evaluate(e.base(), bindings);
      double x = evaluate(e.exponent(), bindings);
      return real_power(b, e.exponent(), x);
    }
    case Kind::Function: {
      double a = evaluate(e.argument(), bindings);
      switch (e.function()) {
        case Function::Sin: return std::sin(a);
        case Function::Cos: return std::cos(a);
        case Function::Tan: return std::tan(a);
        case Function::Exp: return std::exp(a);
        case Function::Ln: return a > 0 ? std::log(a) : std::nan("");
        case Function::Sqrt: return a >= 0 ? std::sqrt(a) : std::nan("");
        case Function::Abs: return std::fabs(a);
      }
      break;
    }
    case Kind::Operator:
      throw Error(ErrorCode::UnsupportedNode, "cannot evaluate an unresolved d(...) operator");
  }
  return std::nan("");
}

std::optional<Rational> evaluate_exact(const Expr& e, const ExactBindings& bindings) {
  switch (e.kind()) {
    case Kind::Number:
      return e.value();
    case Kind::Constant:
      if (e.named() == NamedConstant::C || e.named() == NamedConstant::Epsilon) unbound(std::string(constant_name(e.named())));
      return std::nullopt;
    case Kind::Symbol:
    case Kind::Differential: {
      auto it = bindings.find(atom_key(e));
      if (it == bindings.end()) unbound(atom_key(e));
      return it->second;
    }
    case Kind::Sum: {
      Rational total = 0;
      for (const Expr& t : e.operands()) {
        auto v = evaluate_exact(t, bindings);
        if (!v) return std::nullopt;
        total += *v;
      }
      return total;
    }
    case Kind::Product: {
      Rational total = 1;
      for (const Expr& f : e.operands()) {
        auto v = evaluate_exact(f, bindings);
        if (!v) return std::nullopt;
        total *= *v;
      }
      return total;
    }
    case Kind::Power: {
      auto b = evaluate_exact(e.base(), bindings);
      auto x = evaluate_exact(e.exponent(), bindings);
      if (!b || !x) return std::nullopt;
      auto p = to_long(numerator(*x));
      auto q = to_long(denominator(*x));
      if (!p || !q || std::labs(*p) > 4096 || *q > 64) return std::nullopt;
      if (*b == 0 && *p < 0) return std::nullopt;
      Rational base = *b;
      if (*q != 1) {
        auto root = exact_root(base, static_cast<unsigned long>(*q));
        if (!root) return std::nullopt;
        base = *root;
      }
      return leibniz::pow(base, *p);
    }
    case Kind::Function: {
      auto a = evaluate_exact(e.argument(), bindings);
      if (!a) return std::nullopt;
      switch (e.function()) {
        case Function::Abs: return boost::multiprecision::abs(*a);
        case Function::Sqrt:
          if (*a < 0) return std::nullopt;
          return exact_root(*a, 2);
        case Function::Sin:
        case Function::Tan:
          if (*a == 0) return Rational(0);
          return std::nullopt;
        case Function::Cos:
        case Function::Exp:
          if (*a == 0) return Rational(1);
          return std::nullopt;
        case Function::Ln:
          if (*a == 1) return Rational(0);
          return std::nullopt;
      }
      return std::nullopt;
    }
    case Kind::Operator:
      throw Error(ErrorCode::UnsupportedNode, "cannot evaluate an unresolved d(...) operator");
  }
  return std::nullopt;
}

bool is_zero(const Expr& e) {
  Expr n = normalize(e);
  if (n.is_zero()) return true;
  if (!n.has_variable()) return false;

  Atoms atoms = free_atoms(n);
  std::mt19937_64 rng(0x5eed'1e1b'0001ULL);
  std::uniform_real_distribution<double> dist(0.6, 2.4);
  constexpr int kProbes = 5;
  int agreeing = 0;
  for (int probe = 0; probe < kProbes; ++probe) {
    NumericBindings values;
    for (const auto& s : atoms.symbols) values[s] = dist(rng);
    for (const auto& d : atoms.differentials) values[d.name()] = dist(rng);
    double v = 0;
    try {
      v = evaluate(n, values);
    } catch (const Error&) {
      return false;
    }
    if (!std::isfinite(v)) continue;
    // Scale by the magnitude of the individual terms so large cancelling
    // terms are judged relative to their size.
    double scale = 1;
    if (n.is(Kind::Sum)) {
      for (const Expr& t : n.operands()) scale = std::max(scale, std::fabs(evaluate(t, values)));
    }
    if (std::fabs(v) > 1e-9 * scale) return false;
    ++agreeing;
  }
  return agreeing >= 3;
}

bool is_known_positive(const Expr& e, const Assumptions& assumptions) {
  switch (e.kind()) {
    case Kind::Number:
      return e.value() > 0;
    case Kind::Constant:
      return e.named() == NamedConstant::Pi || e.named() == NamedConstant::E;
    case Kind::Symbol:
      return assumptions.positive.contains(e.name());
    case Kind::Product:
    case Kind::Sum:
      for (const Expr& x : e.operands()) {
        if (!is_known_positive(x, assumptions)) return false;
      }
      return true;
    case Kind::Power:
      return is_known_positive(e.base(), assumptions);
    case Kind::Function:
      if (e.function() == Function::Exp) return true;
      if (e.function() == Function::Sqrt) return is_known_positive(e.argument(), assumptions);
      return false;
    default:
      return false;
  }
}

}  // namespace leibniz
