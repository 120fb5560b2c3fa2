#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pmaxflow {

enum class ErrorCode {
  kInvalidGraph,
  kDisconnectedGraph,
  kInvalidCapacity,
  kSourceEqualsSink,
  kInfeasibleFlow,
  kNotBalanced,
  kNoConvergence,
  kResistanceRatio,
  kCongestionExceeded,
  kPoorDualFit,
  kCouplingLost,
  kDegenerateStep,
  kWeightBudgetExceeded,
  kIterationCapExceeded,
  kInvalidParams,
  kIo,
  kParse,
};

std::string_view ToString(ErrorCode code);

// Compact text for a double in error messages.
std::string FormatNumber(double x);

// All recoverable failures in the library are reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ToString(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pmaxflow
