#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace leibniz {

enum class ErrorCode {
  DegenerateExpression,
  UnsupportedNode,
  NonPositiveBase,
  NotLinearInDifferentials,
  TargetAbsent,
  UnderdeterminedSystem,
  HeldTargetConflict,
  ZeroDivision,
  DomainEdge,
  OrderExhausted,
  NotExact,
  Unmatched,
  UnboundSymbol,
  NoConvergence,
  SingularIntegrand,
  InvalidArgument,
  ParseError,
};

std::string_view code_name(ErrorCode code);

/// Base of every domain failure raised by the engine. The code is stable and
/// is what the CLI reports in JSON mode.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace leibniz
