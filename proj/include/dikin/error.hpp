#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dikin {

enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  NotStrictlyFeasible,
  InfeasiblePoint,
  CenterNotStationary,
  NoInteriorFound,
  Unbounded,
  MaxIterations,
  NotPositiveDefinite,
  MetricNotPD,
  NoConvergence,
  DimensionTooLarge,
  DegenerateRange,
  EpsilonOutOfRange,
  MTooSmall,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code. `index` names the offending
/// constraint where one applies (NotStrictlyFeasible, PSD violations), else -1.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, int index = -1)
      : std::runtime_error(what), code_(code), index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  int index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  int index_;
};

}  // namespace dikin
