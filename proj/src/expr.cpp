#include "leibniz/expr.hpp"

#include "leibniz/error.hpp"
#include "node.hpp"

#include <algorithm>
#include <array>

namespace leibniz {

using detail::Node;

std::string_view constant_name(NamedConstant c) {
  switch (c) {
    case NamedConstant::Pi: return "pi";
    case NamedConstant::E: return "e";
    case NamedConstant::C: return "C";
    case NamedConstant::Epsilon: return "eps";
  }
  return "?";
}

std::string_view function_name(Function f) {
  switch (f) {
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Tan: return "tan";
    case Function::Exp: return "exp";
    case Function::Ln: return "ln";
    case Function::Sqrt: return "sqrt";
    case Function::Abs: return "abs";
  }
  return "?";
}

bool is_reserved_name(std::string_view name) {
  static constexpr std::array<std::string_view, 11> reserved = {
      "sin", "cos", "tan", "exp", "ln", "sqrt", "abs", "pi", "e", "C", "eps"};
  return std::find(reserved.begin(), reserved.end(), name) != reserved.end();
}

std::string DifferentialAtom::name() const {
  if (order == 1) return "d" + base;
  return "d" + std::to_string(order) + base;
}

Expr Node::make(Node node) {
  switch (node.kind) {
    case Kind::Symbol:
      node.has_variable = true;
      break;
    case Kind::Differential:
      node.has_variable = true;
      node.has_differential = true;
      break;
    case Kind::Operator:
      node.has_operator = true;
      node.has_differential = true;
      break;
    default:
      break;
  }
  for (const Expr& child : node.operands) {
    node.has_differential = node.has_differential || child.has_differential();
    node.has_variable = node.has_variable || child.has_variable();
    node.has_operator = node.has_operator || child.has_operator();
    node.size += child.node_count();
  }
  return Expr(std::make_shared<const Node>(std::move(node)));
}

namespace {

const Expr& zero_expr() {
  static const Expr zero = [] {
    Node n;
    n.kind = Kind::Number;
    n.value = 0;
    return Node::make(std::move(n));
  }();
  return zero;
}

}  // namespace

Expr::Expr() : node_(zero_expr().node_) {}

Expr Expr::number(Rational value) {
  Node n;
  n.kind = Kind::Number;
  n.value = std::move(value);
  return Node::make(std::move(n));
}

Expr Expr::integer(long value) { return number(Rational(value)); }

Expr Expr::constant(NamedConstant c) {
  Node n;
  n.kind = Kind::Constant;
  n.named = c;
  return Node::make(std::move(n));
}

Expr Expr::symbol(std::string name) {
  if (name.empty()) throw Error(ErrorCode::InvalidArgument, "symbol names must be nonempty");
  Node n;
  n.kind = Kind::Symbol;
  n.name = std::move(name);
  return Node::make(std::move(n));
}

Expr Expr::differential(std::string base, int order) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "differential order must be >= 1");
  if (base.empty()) throw Error(ErrorCode::InvalidArgument, "differential base must be nonempty");
  Node n;
  n.kind = Kind::Differential;
  n.name = std::move(base);
  n.order = order;
  return Node::make(std::move(n));
}

Expr Expr::differential(const DifferentialAtom& atom) { return differential(atom.base, atom.order); }

Expr Expr::differential_operator(int order, Expr operand) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "differential order must be >= 1");
  Node n;
  n.kind = Kind::Operator;
  n.order = order;
  n.operands.push_back(std::move(operand));
  return Node::make(std::move(n));
}

Expr Expr::raw_sum(std::vector<Expr> terms) {
  Node n;
  n.kind = Kind::Sum;
  n.operands = std::move(terms);
  return Node::make(std::move(n));
}

Expr Expr::raw_product(std::vector<Expr> factors) {
  Node n;
  n.kind = Kind::Product;
  n.operands = std::move(factors);
  return Node::make(std::move(n));
}

Expr Expr::raw_power(Expr base, Expr exponent) {
  Node n;
  n.kind = Kind::Power;
  n.operands = {std::move(base), std::move(exponent)};
  return Node::make(std::move(n));
}

Expr Expr::raw_apply(Function f, Expr argument) {
  Node n;
  n.kind = Kind::Function;
  n.function = f;
  n.operands.push_back(std::move(argument));
  return Node::make(std::move(n));
}

Kind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
NamedConstant Expr::named() const { return node_->named; }
const std::string& Expr::name() const { return node_->name; }
int Expr::order() const { return node_->order; }
Function Expr::function() const { return node_->function; }
DifferentialAtom Expr::atom() const { return DifferentialAtom{node_->name, node_->order}; }
std::span<const Expr> Expr::operands() const { return node_->operands; }
const Expr& Expr::base() const { return node_->operands.at(0); }
const Expr& Expr::exponent() const { return node_->operands.at(1); }
const Expr& Expr::argument() const { return node_->operands.at(0); }

bool Expr::is_number(long v) const { return kind() == Kind::Number && node_->value == v; }
bool Expr::is_integer() const { return kind() == Kind::Number && leibniz::is_integer(node_->value); }
bool Expr::has_differential() const { return node_->has_differential; }
bool Expr::has_variable() const { return node_->has_variable; }
bool Expr::has_operator() const { return node_->has_operator; }
std::size_t Expr::node_count() const { return node_->size; }

int compare(const Expr& a, const Expr& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  auto cmp = [](const auto& x, const auto& y) { return x < y ? -1 : (y < x ? 1 : 0); };
  switch (a.kind()) {
    case Kind::Number:
      return cmp(a.value(), b.value());
    case Kind::Constant:
      return cmp(a.named(), b.named());
    case Kind::Symbol:
      return cmp(a.name(), b.name());
    case Kind::Differential:
      if (int c = cmp(a.name(), b.name())) return c;
      return cmp(a.order(), b.order());
    case Kind::Function:
      if (int c = cmp(a.function(), b.function())) return c;
      return compare(a.argument(), b.argument());
    case Kind::Operator:
      if (int c = cmp(a.order(), b.order())) return c;
      return compare(a.argument(), b.argument());
    case Kind::Power:
    case Kind::Product:
    case Kind::Sum: {
      auto xs = a.operands();
      auto ys = b.operands();
      std::size_t n = std::min(xs.size(), ys.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(xs[i], ys[i])) return c;
      }
      return cmp(xs.size(), ys.size());
    }
  }
  return 0;
}

bool operator==(const Expr& a, const Expr& b) { return a.node_ == b.node_ || compare(a, b) == 0; }

std::strong_ordering operator<=>(const Expr& a, const Expr& b) {
  int c = compare(a, b);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
Expr operator-(const Expr& a) { return Expr::product({Expr::integer(-1), a}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::product({a, Expr::power(b, Expr::integer(-1))}); }
Expr pow(const Expr& base, const Expr& exponent) { return Expr::power(base, exponent); }
Expr pow(const Expr& base, long exponent) { return Expr::power(base, Expr::integer(exponent)); }

std::pair<Rational, Expr> split_coefficient(const Expr& term) {
  if (term.is_number()) return {term.value(), Expr::integer(1)};
  if (term.is(Kind::Product) && term.operands().front().is_number()) {
    auto ops = term.operands();
    std::vector<Expr> rest(ops.begin() + 1, ops.end());
    if (rest.size() == 1) return {ops.front().value(), rest.front()};
    return {ops.front().value(), Expr::raw_product(std::move(rest))};
  }
  return {Rational(1), term};
}

namespace {

Expr rebuild(const Expr& e, std::vector<Expr> ops) {
  switch (e.kind()) {
    case Kind::Sum: return Expr::sum(std::move(ops));
    case Kind::Product: return Expr::product(std::move(ops));
    case Kind::Power: return Expr::power(std::move(ops[0]), std::move(ops[1]));
    case Kind::Function: return Expr::apply(e.function(), std::move(ops[0]));
    case Kind::Operator: return Expr::differential_operator(e.order(), std::move(ops[0]));
    default: return e;
  }
}

Expr substitute_rec(const Expr& e, const Bindings& bindings) {
  if (e.is(Kind::Symbol) || e.is(Kind::Differential)) {
    auto it = bindings.find(e);
    return it == bindings.end() ? e : it->second;
  }
  if (e.operands().empty()) return e;
  std::vector<Expr> ops;
  ops.reserve(e.operands().size());
  for (const Expr& child : e.operands()) ops.push_back(substitute_rec(child, bindings));
  return rebuild(e, std::move(ops));
}

void collect_atoms(const Expr& e, Atoms& out) {
  if (e.is(Kind::Symbol)) {
    out.symbols.insert(e.name());
  } else if (e.is(Kind::Differential)) {
    out.differentials.insert(e.atom());
  }
  for (const Expr& child : e.operands()) collect_atoms(child, out);
}

}  // namespace

Expr normalize(const Expr& e) {
  if (e.operands().empty()) return e;
  std::vector<Expr> ops;
  ops.reserve(e.operands().size());
  for (const Expr& child : e.operands()) ops.push_back(normalize(child));
  return rebuild(e, std::move(ops));
}

Expr substitute(const Expr& e, const Bindings& bindings) {
  if (bindings.empty()) return normalize(e);
  return normalize(substitute_rec(e, bindings));
}

Atoms free_atoms(const Expr& e) {
  Atoms atoms;
  collect_atoms(e, atoms);
  return atoms;
}

Expr apply_independence(const Expr& e, const Assumptions& assumptions) {
  if (assumptions.independent.empty() || !e.has_differential()) return e;
  Bindings zeroes;
  for (const auto& atom : free_atoms(e).differentials) {
    if (atom.order >= 2 && assumptions.independent.contains(atom.base)) zeroes.emplace(Expr::differential(atom), Expr());
  }
  if (zeroes.empty()) return e;
  return substitute(e, zeroes);
}

Equation::Equation(Expr lhs, Expr rhs) : lhs_(normalize(lhs)), rhs_(normalize(rhs)) {}

}  // namespace leibniz
