#include "leibniz/format.hpp"

#include "leibniz/error.hpp"

#include <algorithm>
#include <ostream>

namespace leibniz {

namespace {

enum Prec { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

struct Piece {
  std::string text;
  int prec;
};

// Display order inside a product: differential-free factors first, then
// differentials; plain symbols and their numeric powers lead each group.
int display_class(const Expr& e) {
  const Expr& b = e.is(Kind::Power) && e.exponent().is_number() ? e.base() : e;
  return b.is(Kind::Symbol) || b.is(Kind::Constant) ? 0 : 1;
}

bool display_less(const Expr& a, const Expr& b) {
  if (a.has_differential() != b.has_differential()) return !a.has_differential();
  if (display_class(a) != display_class(b)) return display_class(a) < display_class(b);
  const Expr& ka = a.is(Kind::Power) ? a.base() : a;
  const Expr& kb = b.is(Kind::Power) ? b.base() : b;
  if (int c = compare(ka, kb)) return c < 0;
  return compare(a, b) < 0;
}

bool is_reciprocal(const Expr& e) {
  return e.is(Kind::Power) && e.exponent().is_number() && e.exponent().value() < 0;
}

class Printer {
 public:
  explicit Printer(Style style) : latex_(style == Style::LaTeX) {}

  std::string print(const Expr& e) { return piece(e).text; }

 private:
  std::string wrap(const Piece& p, int min_prec) const {
    if (p.prec >= min_prec) return p.text;
    return latex_ ? "\\left(" + p.text + "\\right)" : "(" + p.text + ")";
  }

  Piece negate(const Piece& p) const { return {"-" + wrap(p, kUnary), kUnary}; }

  Piece piece(const Expr& e) {
    bool negative = false;
    Piece p = magnitude(e, negative);
    return negative ? negate(p) : p;
  }

  Piece rational(const Rational& r) const {
    if (is_integer(r)) return {numerator(r).str(), kAtom};
    if (latex_) return {"\\frac{" + numerator(r).str() + "}{" + denominator(r).str() + "}", kAtom};
    return {numerator(r).str() + "/" + denominator(r).str(), kProduct};
  }

  // Piece for |e|; sets `negative` when e carries a negative coefficient.
  Piece magnitude(const Expr& e, bool& negative) {
    negative = false;
    switch (e.kind()) {
      case Kind::Number:
        negative = e.value() < 0;
        return rational(boost::multiprecision::abs(e.value()));
      case Kind::Constant:
        return {constant(e.named()), kAtom};
      case Kind::Symbol:
        return {e.name(), kAtom};
      case Kind::Differential:
        return {differential(e), kAtom};
      case Kind::Function:
        return function(e);
      case Kind::Operator: {
        std::string head = latex_ ? "\\mathrm{d}" : "d";
        if (e.order() > 1) head += latex_ ? "^{" + std::to_string(e.order()) + "}" : std::to_string(e.order());
        std::string inner = print(e.argument());
        return {latex_ ? head + "\\left(" + inner + "\\right)" : head + "(" + inner + ")", kAtom};
      }
      case Kind::Power:
        if (is_reciprocal(e)) return product(e, negative);
        return power(e.base(), e.exponent());
      case Kind::Product:
        return product(e, negative);
      case Kind::Sum:
        return sum(e);
    }
    return {"?", kAtom};
  }

  std::string constant(NamedConstant c) const {
    if (!latex_) return std::string(constant_name(c));
    switch (c) {
      case NamedConstant::Pi: return "\\pi";
      case NamedConstant::E: return "e";
      case NamedConstant::C: return "C";
      case NamedConstant::Epsilon: return "\\varepsilon";
    }
    return "?";
  }

  std::string differential(const Expr& e) const {
    if (!latex_) return e.atom().name();
    if (e.order() == 1) return "\\mathrm{d}" + e.name();
    std::string k = std::to_string(e.order());
    if (k.size() > 1) k = "{" + k + "}";
    return "\\mathrm{d}^" + k + " " + e.name();
  }

  Piece function(const Expr& e) {
    std::string inner = print(e.argument());
    if (!latex_) return {std::string(function_name(e.function())) + "(" + inner + ")", kAtom};
    switch (e.function()) {
      case Function::Sqrt: return {"\\sqrt{" + inner + "}", kAtom};
      case Function::Abs: return {"\\left|" + inner + "\\right|", kAtom};
      default: return {"\\" + std::string(function_name(e.function())) + "\\left(" + inner + "\\right)", kAtom};
    }
  }

  Piece power(const Expr& base, const Expr& exponent) {
    if (exponent.is_number() && denominator(exponent.value()) == 2) {
      std::string inner = print(base);
      std::string root = latex_ ? "\\sqrt{" + inner + "}" : "sqrt(" + inner + ")";
      Integer k = numerator(exponent.value());
      if (k == 1) return {root, kAtom};
      return {latex_ ? root + "^{" + k.str() + "}" : root + "^" + k.str(), kPower};
    }
    std::string b;
    if (latex_ && base.is(Kind::Differential) && base.order() > 1) {
      b = "\\left(" + differential(base) + "\\right)";
    } else if (latex_ && base.is(Kind::Function) && base.function() != Function::Sqrt && base.function() != Function::Abs) {
      b = "\\left(" + print(base) + "\\right)";
    } else {
      b = wrap(piece(base), kAtom);
    }
    if (latex_) return {b + "^{" + print(exponent) + "}", kPower};
    return {b + "^" + wrap(piece(exponent), kAtom), kPower};
  }

  Piece product(const Expr& e, bool& negative) {
    Rational coefficient = 1;
    std::vector<Expr> numer;
    std::vector<Expr> denom;
    auto place = [&](const Expr& f) {
      if (f.is_number()) {
        coefficient *= f.value();
      } else if (is_reciprocal(f)) {
        Rational k = -f.exponent().value();
        denom.push_back(k == 1 ? f.base() : Expr::raw_power(f.base(), Expr::number(k)));
      } else {
        numer.push_back(f);
      }
    };
    if (e.is(Kind::Product)) {
      for (const Expr& f : e.operands()) place(f);
    } else {
      place(e);
    }
    negative = coefficient < 0;
    coefficient = boost::multiprecision::abs(coefficient);
    std::sort(numer.begin(), numer.end(), display_less);
    std::sort(denom.begin(), denom.end(), display_less);

    std::vector<Piece> top;
    std::vector<Piece> bottom;
    if (numerator(coefficient) != 1 || numer.empty()) top.push_back({numerator(coefficient).str(), kAtom});
    for (const Expr& f : numer) top.push_back(piece(f));
    if (denominator(coefficient) != 1) bottom.push_back({denominator(coefficient).str(), kAtom});
    for (const Expr& f : denom) bottom.push_back(piece(f));

    std::string sep = latex_ ? " " : "*";
    auto join = [&](const std::vector<Piece>& items, int min_prec) {
      std::string out;
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += (latex_ && items[i - 1].prec == kAtom && std::isdigit(static_cast<unsigned char>(items[i].text.front()))) ? " \\cdot " : sep;
        out += wrap(items[i], min_prec);
      }
      return out;
    };

    if (latex_) {
      std::string t = join(top, kProduct);
      if (bottom.empty()) return {t, top.size() == 1 ? top.front().prec : kProduct};
      if (top.size() == 1) t = top.front().text;
      std::string b = bottom.size() == 1 ? bottom.front().text : join(bottom, kProduct);
      return {"\\frac{" + t + "}{" + b + "}", kAtom};
    }
    if (bottom.empty()) {
      if (top.size() == 1) return top.front();
      return {join(top, kUnary), kProduct};
    }
    std::string t = top.size() == 1 ? wrap(top.front(), kProduct) : join(top, kUnary);
    if (bottom.size() == 1) return {t + "/" + wrap(bottom.front(), kUnary), kProduct};

    // A grouped denominator such as (x*(y + 1)) would be multiplied out when
    // read back, so factors built on sums get a '/' of their own.
    std::vector<Piece> grouped;
    std::vector<Piece> separate;
    std::size_t offset = bottom.size() - denom.size();
    for (std::size_t i = 0; i < bottom.size(); ++i) {
      bool sum_based = false;
      if (i >= offset) {
        const Expr& f = denom[i - offset];
        sum_based = f.is(Kind::Sum) || (f.is(Kind::Power) && f.base().is(Kind::Sum) && f.exponent().is_integer());
      }
      (sum_based ? separate : grouped).push_back(bottom[i]);
    }
    std::string out = t;
    if (grouped.size() == 1) out += "/" + wrap(grouped.front(), kUnary);
    if (grouped.size() > 1) out += "/(" + join(grouped, kUnary) + ")";
    for (const Piece& p : separate) out += "/" + wrap(p, kUnary);
    return {out, kProduct};
  }

  Piece sum(const Expr& e) {
    struct Term {
      Piece piece;
      bool negative;
    };
    std::vector<Term> positive;
    std::vector<Term> negative;
    for (const Expr& t : e.operands()) {
      bool neg = false;
      Piece p = magnitude(t, neg);
      (neg ? negative : positive).push_back({p, neg});
    }
    positive.insert(positive.end(), negative.begin(), negative.end());
    std::string out;
    for (std::size_t i = 0; i < positive.size(); ++i) {
      const Term& t = positive[i];
      if (i == 0) {
        out += t.negative ? negate(t.piece).text : t.piece.text;
      } else {
        out += t.negative ? " - " : " + ";
        out += wrap(t.piece, kProduct);
      }
    }
    return {out, kSum};
  }

  bool latex_;
};

}  // namespace

std::ostream& operator<<(std::ostream& out, const Expr& e) { return out << format_expr(e); }

std::string format_expr(const Expr& e, Style style) {
  if (style == Style::JSON) return to_json(e).dump();
  return Printer(style).print(e);
}

std::string format_equation(const Equation& eq, Style style) {
  if (style == Style::JSON) return nlohmann::json{{"lhs", to_json(eq.lhs())}, {"rhs", to_json(eq.rhs())}}.dump();
  return format_expr(eq.lhs(), style) + " = " + format_expr(eq.rhs(), style);
}

nlohmann::json to_json(const Expr& e) {
  using nlohmann::json;
  auto list = [](std::span<const Expr> xs) {
    json arr = json::array();
    for (const Expr& x : xs) arr.push_back(to_json(x));
    return arr;
  };
  switch (e.kind()) {
    case Kind::Number: return {{"type", "number"}, {"value", to_string(e.value())}};
    case Kind::Constant: return {{"type", "constant"}, {"name", std::string(constant_name(e.named()))}};
    case Kind::Symbol: return {{"type", "symbol"}, {"name", e.name()}};
    case Kind::Differential: return {{"type", "differential"}, {"base", e.name()}, {"order", e.order()}};
    case Kind::Function:
      return {{"type", "function"}, {"name", std::string(function_name(e.function()))}, {"argument", to_json(e.argument())}};
    case Kind::Power: return {{"type", "power"}, {"base", to_json(e.base())}, {"exponent", to_json(e.exponent())}};
    case Kind::Product: return {{"type", "product"}, {"factors", list(e.operands())}};
    case Kind::Sum: return {{"type", "sum"}, {"terms", list(e.operands())}};
    case Kind::Operator: return {{"type", "operator"}, {"order", e.order()}, {"operand", to_json(e.argument())}};
  }
  return nullptr;
}

namespace {

[[noreturn]] void malformed(const std::string& why) { throw Error(ErrorCode::InvalidArgument, "malformed expression JSON: " + why); }

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  std::string num = text.substr(0, slash);
  bool negative = !num.empty() && num.front() == '-';
  auto value = parse_decimal(negative ? num.substr(1) : num);
  if (!value || !is_integer(*value)) malformed("bad number '" + text + "'");
  Rational r = negative ? -*value : *value;
  if (slash != std::string::npos) {
    auto den = parse_decimal(text.substr(slash + 1));
    if (!den || !is_integer(*den) || *den == 0) malformed("bad number '" + text + "'");
    r /= *den;
  }
  return r;
}

}  // namespace

Expr from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type")) malformed("expected an object with a 'type'");
  const std::string type = j.at("type").get<std::string>();
  auto children = [&j](const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) malformed(std::string("missing array '") + key + "'");
    std::vector<Expr> out;
    for (const auto& x : j.at(key)) out.push_back(from_json(x));
    return out;
  };
  try {
    if (type == "number") return Expr::number(parse_rational(j.at("value").get<std::string>()));
    if (type == "symbol") return Expr::symbol(j.at("name").get<std::string>());
    if (type == "differential") return Expr::differential(j.at("base").get<std::string>(), j.at("order").get<int>());
    if (type == "constant") {
      std::string name = j.at("name").get<std::string>();
      for (auto c : {NamedConstant::Pi, NamedConstant::E, NamedConstant::C, NamedConstant::Epsilon}) {
        if (constant_name(c) == name) return Expr::constant(c);
      }
      malformed("unknown constant '" + name + "'");
    }
    if (type == "function") {
      std::string name = j.at("name").get<std::string>();
      for (auto f : {Function::Sin, Function::Cos, Function::Tan, Function::Exp, Function::Ln, Function::Sqrt, Function::Abs}) {
        if (function_name(f) == name) return Expr::apply(f, from_json(j.at("argument")));
      }
      malformed("unknown function '" + name + "'");
    }
    if (type == "power") return Expr::power(from_json(j.at("base")), from_json(j.at("exponent")));
    if (type == "product") return Expr::product(children("factors"));
    if (type == "sum") return Expr::sum(children("terms"));
    if (type == "operator") return Expr::differential_operator(j.at("order").get<int>(), from_json(j.at("operand")));
  } catch (const nlohmann::json::exception& ex) {
    malformed(ex.what());
  }
  malformed("unknown type '" + type + "'");
}

}  // namespace leibniz
