#include "leibniz/hyperreal.hpp"

#include "leibniz/error.hpp"
#include "leibniz/format.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace leibniz {

namespace {

constexpr double kCancellation = 1e-12;

Scalar rounded(double value, double scale) {
  if (std::fabs(value) <= kCancellation * scale) value = 0;
  return Scalar::approx(value);
}

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::optional<int> min_precision(std::optional<int> a, std::optional<int> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

Rational factorial(int k) {
  Rational f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

Scalar Scalar::approx(double value) {
  Scalar s;
  s.exact_.reset();
  s.approx_ = value;
  return s;
}

double Scalar::to_double() const { return exact_ ? leibniz::to_double(*exact_) : approx_; }

bool Scalar::is_zero() const { return exact_ ? *exact_ == 0 : approx_ == 0; }

int Scalar::sign() const {
  if (exact_) return exact_->sign();
  return approx_ > 0 ? 1 : (approx_ < 0 ? -1 : 0);
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) return Scalar(*a.exact_ + *b.exact_);
  double x = a.to_double();
  double y = b.to_double();
  return rounded(x + y, std::max(std::fabs(x), std::fabs(y)));
}

Scalar operator-(const Scalar& a) {
  if (a.exact_) return Scalar(-*a.exact_);
  return Scalar::approx(-a.approx_);
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) return Scalar(*a.exact_ * *b.exact_);
  return Scalar::approx(a.to_double() * b.to_double());
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.is_zero()) throw Error(ErrorCode::ZeroDivision, "division by zero");
  if (a.exact_ && b.exact_) return Scalar(*a.exact_ / *b.exact_);
  return Scalar::approx(a.to_double() / b.to_double());
}

std::string Scalar::str() const { return exact_ ? to_string(*exact_) : shortest(approx_); }

Hyperreal::Hyperreal(Scalar value, int order) : order_(order) { insert(0, value); }

Hyperreal Hyperreal::epsilon(int order) { return monomial(Rational(1), 1, order); }

Hyperreal Hyperreal::monomial(Scalar coefficient, int exponent, int order) {
  Hyperreal h;
  h.order_ = order;
  h.insert(exponent, coefficient);
  return h;
}

void Hyperreal::insert(int exponent, const Scalar& value) {
  if (!value.is_exact()) contaminated_ = true;
  if (precision_ && exponent >= *precision_) return;
  if (exponent > order_) {
    if (!value.is_zero()) cap(order_ + 1);
    return;
  }
  auto it = terms_.find(exponent);
  Scalar sum = it == terms_.end() ? value : it->second + value;
  if (sum.is_zero()) {
    if (it != terms_.end()) terms_.erase(it);
  } else {
    terms_[exponent] = sum;
  }
}

void Hyperreal::cap(std::optional<int> precision) {
  if (!precision) return;
  precision_ = min_precision(precision_, precision);
  terms_.erase(terms_.lower_bound(*precision_), terms_.end());
}

Scalar Hyperreal::coefficient(int exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? Scalar() : it->second;
}

bool Hyperreal::float_contaminated() const { return contaminated_; }

std::optional<int> Hyperreal::leading_exponent() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.begin()->first;
}

bool Hyperreal::is_infinite() const {
  auto lead = leading_exponent();
  return lead && *lead < 0;
}

bool Hyperreal::is_infinitesimal() const {
  auto lead = leading_exponent();
  return (!lead && (!precision_ || *precision_ > 0)) || (lead && *lead > 0);
}

bool Hyperreal::is_appreciable() const {
  auto lead = leading_exponent();
  return lead && *lead == 0;
}

Hyperreal operator+(const Hyperreal& a, const Hyperreal& b) {
  Hyperreal out;
  out.order_ = std::max(a.order_, b.order_);
  out.contaminated_ = a.contaminated_ || b.contaminated_;
  out.cap(min_precision(a.precision_, b.precision_));
  for (const auto& [k, c] : a.terms_) out.insert(k, c);
  for (const auto& [k, c] : b.terms_) out.insert(k, c);
  return out;
}

Hyperreal operator-(const Hyperreal& a) {
  Hyperreal out = a;
  for (auto& [k, c] : out.terms_) c = -c;
  return out;
}

Hyperreal operator-(const Hyperreal& a, const Hyperreal& b) { return a + (-b); }

Hyperreal operator*(const Hyperreal& a, const Hyperreal& b) {
  Hyperreal out;
  out.order_ = std::max(a.order_, b.order_);
  out.contaminated_ = a.contaminated_ || b.contaminated_;
  if (a.is_exact_zero() || b.is_exact_zero()) return out;
  // Lowest exponent either factor can contribute; an all-cancelled factor
  // contributes nothing below its precision.
  int la = a.terms_.empty() ? *a.precision_ : a.terms_.begin()->first;
  int lb = b.terms_.empty() ? *b.precision_ : b.terms_.begin()->first;
  std::optional<int> p;
  if (a.precision_) p = *a.precision_ + lb;
  if (b.precision_) p = min_precision(p, *b.precision_ + la);
  out.cap(p);
  for (const auto& [i, x] : a.terms_) {
    for (const auto& [j, y] : b.terms_) out.insert(i + j, x * y);
  }
  return out;
}

Hyperreal Hyperreal::inverse() const {
  if (is_exact_zero()) throw Error(ErrorCode::ZeroDivision, "division by zero");
  if (terms_.empty()) throw Error(ErrorCode::OrderExhausted, "every known coefficient of the divisor cancelled");
  const int m = terms_.begin()->first;
  const Scalar c = terms_.begin()->second;
  Hyperreal out;
  out.order_ = order_;
  out.contaminated_ = contaminated_;
  if (precision_) out.cap(*precision_ - 2 * m);

  std::vector<Scalar> q;
  for (int j = 0; j - m <= order_ && (!precision_ || j < *precision_ - m); ++j) {
    Scalar acc = j == 0 ? Scalar(Rational(1)) : Scalar();
    for (int i = 1; i <= j; ++i) acc = acc - coefficient(m + i) * q[static_cast<std::size_t>(j - i)];
    q.push_back(acc / c);
    out.insert(j - m, q.back());
  }
  // The recurrence stopped at the window edge; a non-monomial divisor has
  // more nonzero terms beyond it.
  if (terms_.size() > 1 || precision_) out.cap(order_ + 1);
  return out;
}

Hyperreal operator/(const Hyperreal& a, const Hyperreal& b) { return a * b.inverse(); }

Hyperreal Hyperreal::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  Hyperreal result(Scalar(Rational(1)), order_);
  result.contaminated_ = contaminated_;
  Hyperreal base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

template <typename Coefficient>
Hyperreal Hyperreal::compose(const Hyperreal& h, Coefficient&& coefficient) const {
  Hyperreal out(coefficient(0), order_);
  if (h.is_exact_zero()) return out;
  Hyperreal power = h;
  for (int k = 1; k <= order_; ++k) {
    Hyperreal term = power * Hyperreal(coefficient(k), order_);
    out = out + term;
    power = power * h;
  }
  out.contaminated_ = out.contaminated_ || h.contaminated_;
  out.cap(order_ + 1);
  return out;
}

Hyperreal Hyperreal::infinitesimal_part(Scalar& standard, const char* function) const {
  if (is_infinite()) {
    throw Error(ErrorCode::DomainEdge, std::string(function) + " of an infinite argument is not an eps-series");
  }
  if (precision_ && *precision_ <= 0) throw Error(ErrorCode::OrderExhausted, "standard part lost to truncation");
  standard = coefficient(0);
  return *this - Hyperreal(standard, order_);
}

Hyperreal Hyperreal::pow(const Rational& r) const {
  if (is_integer(r)) {
    auto n = to_long(numerator(r));
    if (!n) throw Error(ErrorCode::DomainEdge, "exponent too large");
    return pow(*n);
  }
  if (is_exact_zero()) {
    if (r > 0) return *this;
    throw Error(ErrorCode::ZeroDivision, "division by zero");
  }
  if (terms_.empty()) throw Error(ErrorCode::OrderExhausted, "every known coefficient cancelled");
  const int m = terms_.begin()->first;
  const Scalar c = terms_.begin()->second;
  const Integer p = numerator(r);
  const Integer q = denominator(r);
  if ((Integer(m) * p) % q != 0) {
    throw Error(ErrorCode::DomainEdge, "a fractional power of eps^" + std::to_string(m) + " is not an eps-series");
  }
  const long shift = (Integer(m) * p / q).convert_to<long>();
  const bool odd_root = q % 2 == 1;
  if (c.sign() < 0 && !odd_root) throw Error(ErrorCode::DomainEdge, "even root of a negative value");

  // c^r
  Scalar lead;
  if (c.is_exact()) {
    auto root = exact_root(boost::multiprecision::abs(c.exact()), q.convert_to<unsigned long>());
    if (root) {
      Rational magnitude = leibniz::pow(*root, p.convert_to<long>());
      lead = c.sign() < 0 && p % 2 != 0 ? Scalar(-magnitude) : Scalar(magnitude);
    }
  }
  if (lead.is_exact() && lead.is_zero()) {
    double magnitude = std::pow(std::fabs(c.to_double()), to_double(r));
    lead = Scalar::approx(c.sign() < 0 && p % 2 != 0 ? -magnitude : magnitude);
  }

  // (1 + w)^r with w = (*this / (c eps^m)) - 1, expanded within the window
  // left over after the eps^shift factor.
  const int rel_order = order_ - static_cast<int>(shift);
  Hyperreal w;
  w.order_ = std::max(rel_order, 0);
  w.contaminated_ = contaminated_;
  if (precision_) w.cap(*precision_ - m);
  for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it) w.insert(it->first - m, it->second / c);
  Hyperreal series = Hyperreal(Scalar(Rational(1)), w.order_).compose(w, [&r](int k) {
    Rational binom = 1;
    for (int i = 0; i < k; ++i) binom *= (r - i) / (i + 1);
    return Scalar(binom);
  });
  if (rel_order < 0) series = Hyperreal();

  Hyperreal out;
  out.order_ = order_;
  out.contaminated_ = contaminated_ || series.contaminated_ || !lead.is_exact();
  if (series.precision_) out.cap(*series.precision_ + static_cast<int>(shift));
  if (rel_order < 0) out.cap(order_ + 1);
  for (const auto& [k, v] : series.terms_) out.insert(k + static_cast<int>(shift), v * lead);
  return out;
}

Hyperreal Hyperreal::exp() const {
  Scalar s;
  Hyperreal h = infinitesimal_part(s, "exp");
  Scalar base = s.is_exact() && s.is_zero() ? Scalar(Rational(1)) : Scalar::approx(std::exp(s.to_double()));
  return compose(h, [&base](int k) { return base / Scalar(factorial(k)); });
}

Hyperreal Hyperreal::ln() const {
  Scalar s;
  Hyperreal h = infinitesimal_part(s, "ln");
  if (s.sign() <= 0) throw Error(ErrorCode::DomainEdge, "ln needs a positive appreciable argument");
  Scalar at = s.is_exact() && s.exact() == 1 ? Scalar() : Scalar::approx(std::log(s.to_double()));
  return compose(h, [&](int k) {
    if (k == 0) return at;
    Scalar c = Scalar(Rational(k % 2 == 1 ? 1 : -1, k));
    for (int i = 0; i < k; ++i) c = c / s;
    return c;
  });
}

Hyperreal Hyperreal::sin() const {
  Scalar s;
  Hyperreal h = infinitesimal_part(s, "sin");
  bool zero = s.is_exact() && s.is_zero();
  double sv = std::sin(s.to_double());
  double cv = std::cos(s.to_double());
  return compose(h, [&](int k) {
    Scalar derivative;
    switch (k % 4) {
      case 0: derivative = zero ? Scalar() : Scalar::approx(sv); break;
      case 1: derivative = zero ? Scalar(Rational(1)) : Scalar::approx(cv); break;
      case 2: derivative = zero ? Scalar() : Scalar::approx(-sv); break;
      default: derivative = zero ? Scalar(Rational(-1)) : Scalar::approx(-cv); break;
    }
    return derivative / Scalar(factorial(k));
  });
}

Hyperreal Hyperreal::cos() const {
  Scalar s;
  Hyperreal h = infinitesimal_part(s, "cos");
  bool zero = s.is_exact() && s.is_zero();
  double sv = std::sin(s.to_double());
  double cv = std::cos(s.to_double());
  return compose(h, [&](int k) {
    Scalar derivative;
    switch (k % 4) {
      case 0: derivative = zero ? Scalar(Rational(1)) : Scalar::approx(cv); break;
      case 1: derivative = zero ? Scalar() : Scalar::approx(-sv); break;
      case 2: derivative = zero ? Scalar(Rational(-1)) : Scalar::approx(-cv); break;
      default: derivative = zero ? Scalar() : Scalar::approx(sv); break;
    }
    return derivative / Scalar(factorial(k));
  });
}

Hyperreal Hyperreal::tan() const { return sin() / cos(); }

Hyperreal Hyperreal::sqrt() const {
  if (!terms_.empty() && terms_.begin()->second.sign() < 0) {
    throw Error(ErrorCode::DomainEdge, "sqrt of a negative value");
  }
  return pow(Rational(1, 2));
}

Hyperreal Hyperreal::abs() const {
  if (is_exact_zero()) return *this;
  if (terms_.empty()) throw Error(ErrorCode::OrderExhausted, "sign lost to truncation");
  return terms_.begin()->second.sign() < 0 ? -*this : *this;
}

std::optional<Expr> Hyperreal::to_expr() const {
  std::vector<Expr> parts;
  for (const auto& [k, c] : terms_) {
    if (!c.is_exact()) return std::nullopt;
    parts.push_back(Expr::number(c.exact()) * leibniz::pow(Expr::constant(NamedConstant::Epsilon), k));
  }
  return Expr::sum(std::move(parts));
}

std::string Hyperreal::str() const {
  // Ascending powers of eps, so the standard part (if any) comes first.
  std::string out;
  for (const auto& [k, c] : terms_) {
    bool negative = c.sign() < 0;
    std::string term;
    if (c.is_exact()) {
      Expr unit = leibniz::pow(Expr::constant(NamedConstant::Epsilon), k);
      term = format_expr(Expr::number(boost::multiprecision::abs(c.exact())) * unit);
    } else {
      std::string magnitude = shortest(std::fabs(c.to_double()));
      std::string unit = k == 0 ? "" : (k == 1 ? "eps" : "eps^" + (k < 0 ? "(" + std::to_string(k) + ")" : std::to_string(k)));
      term = unit.empty() ? magnitude : magnitude + "*" + unit;
    }
    if (out.empty()) {
      out = negative ? "-" + term : term;
    } else {
      out += (negative ? " - " : " + ") + term;
    }
  }
  return out.empty() ? "0" : out;
}

Hyperreal hr_eval(const Expr& e, const HyperBindings& bindings, int order) {
  switch (e.kind()) {
    case Kind::Number:
      return Hyperreal(Scalar(e.value()), order);
    case Kind::Constant:
      switch (e.named()) {
        case NamedConstant::Pi: return Hyperreal(Scalar::approx(std::numbers::pi), order);
        case NamedConstant::E: return Hyperreal(Scalar::approx(std::numbers::e), order);
        case NamedConstant::Epsilon: return Hyperreal::epsilon(order);
        case NamedConstant::C: break;
      }
      throw Error(ErrorCode::UnboundSymbol, "the constant of integration C has no value");
    case Kind::Symbol: {
      auto it = bindings.find(e.name());
      if (it == bindings.end()) throw Error(ErrorCode::UnboundSymbol, "no value bound for '" + e.name() + "'");
      return it->second;
    }
    case Kind::Differential:
    case Kind::Operator:
      throw Error(ErrorCode::InvalidArgument, "differentials cannot be evaluated as eps-series");
    case Kind::Sum: {
      Hyperreal total(Scalar(), order);
      for (const Expr& t : e.operands()) total = total + hr_eval(t, bindings, order);
      return total;
    }
    case Kind::Product: {
      Hyperreal total(Scalar(Rational(1)), order);
      for (const Expr& f : e.operands()) total = total * hr_eval(f, bindings, order);
      return total;
    }
    case Kind::Power: {
      if (e.exponent().is_number()) return hr_eval(e.base(), bindings, order).pow(e.exponent().value());
      Hyperreal v = hr_eval(e.exponent(), bindings, order);
      if (e.base().is(Kind::Constant) && e.base().named() == NamedConstant::E) return v.exp();
      return (v * hr_eval(e.base(), bindings, order).ln()).exp();
    }
    case Kind::Function: {
      Hyperreal a = hr_eval(e.argument(), bindings, order);
      switch (e.function()) {
        case Function::Sin: return a.sin();
        case Function::Cos: return a.cos();
        case Function::Tan: return a.tan();
        case Function::Exp: return a.exp();
        case Function::Ln: return a.ln();
        case Function::Sqrt: return a.sqrt();
        case Function::Abs: return a.abs();
      }
      break;
    }
  }
  throw Error(ErrorCode::UnsupportedNode, "cannot evaluate expression");
}

std::string LimitResult::str() const {
  switch (kind) {
    case Kind::Finite: return value.str();
    case Kind::PlusInfinity: return "inf";
    case Kind::MinusInfinity: return "-inf";
    case Kind::Undefined: return "undefined";
  }
  return "undefined";
}

bool operator==(const LimitResult& a, const LimitResult& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case LimitResult::Kind::Finite:
      if (a.value.is_exact() && b.value.is_exact()) return a.value.exact() == b.value.exact();
      return a.value.to_double() == b.value.to_double();
    case LimitResult::Kind::Undefined:
      return a.reason == b.reason;
    default:
      return true;
  }
}

LimitResult std_part(const Hyperreal& h) {
  if (h.is_exact_zero()) return LimitResult::finite(Scalar());
  auto lead = h.leading_exponent();
  if (lead && *lead < 0) {
    return h.coefficient(*lead).sign() > 0 ? LimitResult::plus_infinity() : LimitResult::minus_infinity();
  }
  if (h.precision() && *h.precision() <= 0) {
    throw Error(ErrorCode::OrderExhausted, "the standard part lies beyond the truncation order");
  }
  Scalar s = h.coefficient(0);
  if (h.float_contaminated() && s.is_exact()) s = Scalar::approx(s.to_double());
  return LimitResult::finite(s);
}

namespace {

constexpr int kRetryOrder = 16;

template <typename Evaluate>
LimitResult with_retry(int order, Evaluate&& evaluate) {
  for (int n : {order, kRetryOrder}) {
    if (n < order) continue;
    try {
      return std_part(evaluate(n));
    } catch (const Error& err) {
      if (err.code() == ErrorCode::DomainEdge) return LimitResult::undefined("not representable");
      if (err.code() != ErrorCode::OrderExhausted) throw;
    }
    if (order >= kRetryOrder) break;
  }
  return LimitResult::undefined("order exhausted");
}

bool agree(const LimitResult& a, const LimitResult& b) {
  if (a.kind != b.kind) return false;
  if (!a.is_finite()) return true;
  if (a.value.is_exact() && b.value.is_exact()) return a.value.exact() == b.value.exact();
  double x = a.value.to_double();
  double y = b.value.to_double();
  return std::fabs(x - y) <= 1e-9 * std::max({1.0, std::fabs(x), std::fabs(y)});
}

}  // namespace

LimitResult limit(const Expr& e, const std::string& var, const LimitPoint& point, Side side, int order) {
  if (e.has_differential()) throw Error(ErrorCode::InvalidArgument, "limits are taken of differential-free expressions");
  auto approach = [&](int n, int direction) {
    switch (point.kind) {
      case LimitPoint::Kind::PlusInfinity: return Hyperreal::monomial(Rational(1), -1, n);
      case LimitPoint::Kind::MinusInfinity: return Hyperreal::monomial(Rational(-1), -1, n);
      case LimitPoint::Kind::Finite: break;
    }
    return Hyperreal(Scalar(point.value), n) + Hyperreal::monomial(Rational(direction), 1, n);
  };
  auto one_side = [&](int direction) {
    return with_retry(order, [&](int n) { return hr_eval(e, {{var, approach(n, direction)}}, n); });
  };
  if (point.kind != LimitPoint::Kind::Finite) return one_side(1);
  if (side == Side::Right) return one_side(1);
  if (side == Side::Left) return one_side(-1);
  LimitResult right = one_side(1);
  LimitResult left = one_side(-1);
  if (right.kind == LimitResult::Kind::Undefined) return right;
  if (left.kind == LimitResult::Kind::Undefined) return left;
  if (!agree(left, right)) return LimitResult::undefined("sides disagree");
  return right;
}

LimitResult slope_at(const Expr& f, const std::string& var, const Rational& a, int order) {
  if (f.has_differential()) throw Error(ErrorCode::InvalidArgument, "slopes are taken of differential-free expressions");
  return with_retry(order, [&](int n) {
    Hyperreal at = Hyperreal(Scalar(a), n);
    Hyperreal eps = Hyperreal::epsilon(n);
    Hyperreal rise = hr_eval(f, {{var, at + eps}}, n) - hr_eval(f, {{var, at}}, n);
    return rise / eps;
  });
}

}  // namespace leibniz
