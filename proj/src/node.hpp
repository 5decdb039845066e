#pragma once

#include "leibniz/expr.hpp"

namespace leibniz::detail {

struct Node {
  Kind kind = Kind::Number;
  Rational value;
  std::string name;
  int order = 0;
  NamedConstant named = NamedConstant::Pi;
  Function function = Function::Sin;
  std::vector<Expr> operands;

  bool has_differential = false;
  bool has_variable = false;
  bool has_operator = false;
  std::size_t size = 1;

  /// Computes the cached flags and wraps the node.
  static Expr make(Node node);
};

}  // namespace leibniz::detail
