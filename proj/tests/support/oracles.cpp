#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace leibniz::testing {

Poly::Poly(std::vector<Rational> coefficients) : c_(std::move(coefficients)) { trim(); }

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::derivative() const {
  std::vector<Rational> d;
  for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * static_cast<long>(k));
  return Poly(std::move(d));
}

Rational Poly::at(const Rational& t) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double Poly::at(double t) const {
  double acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + to_double(*it);
  return acc;
}

Expr Poly::to_expr(const std::string& var) const {
  std::vector<Expr> terms;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    terms.push_back(Expr::product({Expr::number(c_[k]), Expr::power(sym(var), num(static_cast<long>(k)))}));
  }
  return Expr::sum(std::move(terms));
}

Rational parametric_second_derivative(const Poly& x, const Poly& y, const Rational& t) {
  Rational x1 = x.derivative().at(t);
  Rational x2 = x.derivative().derivative().at(t);
  Rational y1 = y.derivative().at(t);
  Rational y2 = y.derivative().derivative().at(t);
  return (x1 * y2 - y1 * x2) / (x1 * x1 * x1);
}

double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

double second_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
}

double relative_error(double a, double b, double floor) {
  double scale = std::max({std::fabs(a), std::fabs(b), floor});
  return std::fabs(a - b) / scale;
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  double h = (b - a) / n;
  double total = f(a) + f(b);
  for (int i = 1; i < n; ++i) total += (i % 2 ? 4 : 2) * f(a + i * h);
  return total * h / 3;
}

}  // namespace leibniz::testing
