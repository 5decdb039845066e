#pragma once

#include "leibniz/rational.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace leibniz {

enum class Kind : std::uint8_t {
  Number,
  Constant,
  Symbol,
  Differential,
  Function,
  Power,
  Product,
  Sum,
  // d(expr) / d2(expr) as written by the user; resolved by the differentiation
  // module before anything else looks at the tree.
  Operator,
};

enum class NamedConstant : std::uint8_t { Pi, E, C, Epsilon };

enum class Function : std::uint8_t { Sin, Cos, Tan, Exp, Ln, Sqrt, Abs };

std::string_view constant_name(NamedConstant c);
std::string_view function_name(Function f);

/// d^k(base). Order 1 prints as "dx", order 2 as "d2x".
struct DifferentialAtom {
  std::string base;
  int order = 1;

  std::string name() const;
  auto operator<=>(const DifferentialAtom&) const = default;
};

class Expr;

namespace detail {
struct Node;
}

/// Immutable expression handle. Copies share the underlying tree.
///
/// The static `number`/`symbol`/... factories build atoms. `sum`, `product`,
/// `power` and `apply` are the normalizing constructors: given normalized
/// operands they return the canonical form. The `raw_*` factories build a
/// node verbatim and exist for the parser and for tests that need an
/// unnormalized tree.
class Expr {
 public:
  Expr();  // the number 0

  static Expr number(Rational value);
  static Expr integer(long value);
  static Expr constant(NamedConstant c);
  static Expr symbol(std::string name);
  static Expr differential(std::string base, int order = 1);
  static Expr differential(const DifferentialAtom& atom);

  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(Expr base, Expr exponent);
  static Expr apply(Function f, Expr argument);
  static Expr differential_operator(int order, Expr operand);

  static Expr raw_sum(std::vector<Expr> terms);
  static Expr raw_product(std::vector<Expr> factors);
  static Expr raw_power(Expr base, Expr exponent);
  static Expr raw_apply(Function f, Expr argument);

  Kind kind() const;
  const Rational& value() const;
  NamedConstant named() const;
  /// Symbol name, or the base symbol of a differential atom.
  const std::string& name() const;
  /// Order of a differential atom or operator node.
  int order() const;
  Function function() const;
  DifferentialAtom atom() const;

  std::span<const Expr> operands() const;
  const Expr& base() const;
  const Expr& exponent() const;
  const Expr& argument() const;

  bool is(Kind k) const { return kind() == k; }
  bool is_number() const { return kind() == Kind::Number; }
  bool is_number(long v) const;
  bool is_zero() const { return is_number(0); }
  bool is_one() const { return is_number(1); }
  bool is_integer() const;

  /// True when any differential atom (or pending d operator) occurs below.
  bool has_differential() const;
  /// True when any symbol or differential atom occurs below.
  bool has_variable() const;
  bool has_operator() const;
  std::size_t node_count() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend std::strong_ordering operator<=>(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
  friend struct detail::Node;

  std::shared_ptr<const detail::Node> node_;
};

/// Canonical total order: numbers < named constants < symbols < differential
/// atoms < functions < powers < products < sums < operators.
int compare(const Expr& a, const Expr& b);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, const Expr& exponent);
Expr pow(const Expr& base, long exponent);

inline Expr num(long v) { return Expr::integer(v); }
inline Expr num(long p, long q) { return Expr::number(Rational(p, q)); }
inline Expr sym(std::string name) { return Expr::symbol(std::move(name)); }
inline Expr dvar(std::string base, int order = 1) { return Expr::differential(std::move(base), order); }

/// Rebuilds the tree bottom-up through the normalizing constructors.
/// Throws Error(DegenerateExpression) on division by an exact zero.
Expr normalize(const Expr& e);

/// Polynomial-style degree estimate used by the expansion policy.
long degree(const Expr& e);

/// Simultaneous substitution of symbols and differential atoms, followed by
/// normalization. Keys that are not atoms are ignored.
using Bindings = std::map<Expr, Expr>;
Expr substitute(const Expr& e, const Bindings& bindings);

struct Atoms {
  std::set<std::string> symbols;
  std::set<DifferentialAtom> differentials;
};
Atoms free_atoms(const Expr& e);

/// Splits a normalized term into its rational coefficient and the rest.
std::pair<Rational, Expr> split_coefficient(const Expr& term);

/// Both sides normalized on construction.
class Equation {
 public:
  Equation(Expr lhs, Expr rhs);

  const Expr& lhs() const { return lhs_; }
  const Expr& rhs() const { return rhs_; }
  /// lhs - rhs
  Expr difference() const { return lhs_ - rhs_; }

  friend bool operator==(const Equation&, const Equation&) = default;

 private:
  Expr lhs_;
  Expr rhs_;
};

/// Per-invocation facts about symbols.
struct Assumptions {
  /// Symbols whose differentials of order >= 2 vanish.
  std::set<std::string> independent;
  /// Symbols known to be strictly positive (required by the u^v rule).
  std::set<std::string> positive;
};

/// Replaces d^k x (k >= 2) by 0 for every independent x.
Expr apply_independence(const Expr& e, const Assumptions& assumptions);

bool is_reserved_name(std::string_view name);

}  // namespace leibniz
