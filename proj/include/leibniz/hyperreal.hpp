#pragma once

#include "leibniz/expr.hpp"

#include <map>
#include <optional>
#include <string>

namespace leibniz {

/// A series coefficient: an exact rational, or a double once a transcendental
/// value at a non-trivial point (sin(1), pi, ...) has entered the computation.
/// Sums of doubles that cancel to within 1e-12 of their operands are rounded
/// to zero.
class Scalar {
 public:
  Scalar() = default;
  Scalar(Rational value) : exact_(std::move(value)) {}  // NOLINT: implicit by design
  static Scalar approx(double value);

  bool is_exact() const { return exact_.has_value(); }
  const Rational& exact() const { return *exact_; }
  double to_double() const;
  bool is_zero() const;
  int sign() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);

  std::string str() const;

 private:
  std::optional<Rational> exact_ = Rational(0);
  double approx_ = 0;
};

/// Truncated series sum of c_k * eps^k.
///
/// Every stored exponent is at most order(). precision(), when set, is the
/// exponent p of the unknown remainder O(eps^p): coefficients at p and beyond
/// were discarded somewhere along the way. An exact value has no precision.
class Hyperreal {
 public:
  static constexpr int kDefaultOrder = 8;

  Hyperreal() = default;
  explicit Hyperreal(Scalar value, int order = kDefaultOrder);
  static Hyperreal epsilon(int order = kDefaultOrder);
  static Hyperreal monomial(Scalar coefficient, int exponent, int order = kDefaultOrder);

  int order() const { return order_; }
  const std::map<int, Scalar>& coefficients() const { return terms_; }
  Scalar coefficient(int exponent) const;
  std::optional<int> precision() const { return precision_; }
  bool truncated() const { return precision_.has_value(); }
  bool float_contaminated() const;

  /// Smallest exponent with a nonzero coefficient; nullopt for zero and for
  /// values whose every known coefficient cancelled.
  std::optional<int> leading_exponent() const;
  bool is_exact_zero() const { return terms_.empty() && !precision_; }
  bool is_infinite() const;
  bool is_infinitesimal() const;
  bool is_appreciable() const;

  friend Hyperreal operator+(const Hyperreal& a, const Hyperreal& b);
  friend Hyperreal operator-(const Hyperreal& a, const Hyperreal& b);
  friend Hyperreal operator-(const Hyperreal& a);
  friend Hyperreal operator*(const Hyperreal& a, const Hyperreal& b);
  friend Hyperreal operator/(const Hyperreal& a, const Hyperreal& b);

  /// Throws Error(ZeroDivision) for the exact zero and Error(OrderExhausted)
  /// when no nonzero coefficient is known.
  Hyperreal inverse() const;
  Hyperreal pow(long n) const;
  /// Rational powers; Error(DomainEdge) when the result is not an eps-series.
  Hyperreal pow(const Rational& r) const;

  Hyperreal exp() const;
  Hyperreal ln() const;
  Hyperreal sin() const;
  Hyperreal cos() const;
  Hyperreal tan() const;
  Hyperreal sqrt() const;
  Hyperreal abs() const;

  /// Exact series as an expression in eps; nullopt if float-contaminated.
  std::optional<Expr> to_expr() const;
  /// "10 + eps"; float coefficients in shortest round-trip decimal form.
  std::string str() const;

 private:
  void insert(int exponent, const Scalar& value);
  void cap(std::optional<int> precision);
  // Splits *this into standard part s plus an infinitesimal h; returns h.
  Hyperreal infinitesimal_part(Scalar& standard, const char* function) const;
  // sum of coefficient(k) * h^k for k = 0..order().
  template <typename Coefficient>
  Hyperreal compose(const Hyperreal& h, Coefficient&& coefficient) const;

  std::map<int, Scalar> terms_;
  std::optional<int> precision_;
  int order_ = kDefaultOrder;
  bool contaminated_ = false;
};

using HyperBindings = std::map<std::string, Hyperreal>;

/// Evaluates e with every symbol bound to a series. The constant eps is the
/// series eps; pi and e become double coefficients. Throws Error(UnboundSymbol)
/// for unbound symbols and C, Error(InvalidArgument) for differentials,
/// Error(DomainEdge) for ln/sqrt outside their domain or at a point on its
/// edge, and for transcendental functions of infinite arguments.
Hyperreal hr_eval(const Expr& e, const HyperBindings& bindings, int order = Hyperreal::kDefaultOrder);

struct LimitResult {
  enum class Kind { Finite, PlusInfinity, MinusInfinity, Undefined };

  Kind kind = Kind::Undefined;
  Scalar value;
  std::string reason;

  static LimitResult finite(Scalar v) { return {Kind::Finite, std::move(v), {}}; }
  static LimitResult plus_infinity() { return {Kind::PlusInfinity, {}, {}}; }
  static LimitResult minus_infinity() { return {Kind::MinusInfinity, {}, {}}; }
  static LimitResult undefined(std::string why) { return {Kind::Undefined, {}, std::move(why)}; }

  bool is_finite() const { return kind == Kind::Finite; }
  /// "10", "0.5403023058681398", "inf", "-inf" or "undefined".
  std::string str() const;
  friend bool operator==(const LimitResult& a, const LimitResult& b);
};

/// Standard part. Throws Error(OrderExhausted) when the eps^0 coefficient is
/// beyond the known precision.
LimitResult std_part(const Hyperreal& h);

enum class Side { Left, Right, Both };

/// A limit point: a rational, or plus/minus infinity.
struct LimitPoint {
  enum class Kind { Finite, PlusInfinity, MinusInfinity };
  Kind kind = Kind::Finite;
  Rational value;

  static LimitPoint at(Rational v) { return {Kind::Finite, std::move(v)}; }
  static LimitPoint plus_infinity() { return {Kind::PlusInfinity, 0}; }
  static LimitPoint minus_infinity() { return {Kind::MinusInfinity, 0}; }
};

/// Right: var -> a + eps. Left: var -> a - eps. At +-infinity var -> +-1/eps
/// and the side is ignored. Both requires the two sides to agree. A value
/// that cannot be represented as a series gives Undefined("not representable");
/// if cancellation exhausts the order, the evaluation is retried once at
/// order 16 before giving Undefined("order exhausted").
LimitResult limit(const Expr& e, const std::string& var, const LimitPoint& point, Side side,
                  int order = Hyperreal::kDefaultOrder);

/// Standard part of (f(a + eps) - f(a)) / eps.
LimitResult slope_at(const Expr& f, const std::string& var, const Rational& a, int order = Hyperreal::kDefaultOrder);

}  // namespace leibniz
