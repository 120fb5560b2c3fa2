#include "pmaxflow/error.hpp"

#include <iomanip>
#include <sstream>

namespace pmaxflow {

std::string FormatNumber(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

std::string_view ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidGraph: return "InvalidGraph";
    case ErrorCode::kDisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::kInvalidCapacity: return "InvalidCapacity";
    case ErrorCode::kSourceEqualsSink: return "SourceEqualsSink";
    case ErrorCode::kInfeasibleFlow: return "InfeasibleFlow";
    case ErrorCode::kNotBalanced: return "NotBalanced";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kResistanceRatio: return "ResistanceRatio";
    case ErrorCode::kCongestionExceeded: return "CongestionExceeded";
    case ErrorCode::kPoorDualFit: return "PoorDualFit";
    case ErrorCode::kCouplingLost: return "CouplingLost";
    case ErrorCode::kDegenerateStep: return "DegenerateStep";
    case ErrorCode::kWeightBudgetExceeded: return "WeightBudgetExceeded";
    case ErrorCode::kIterationCapExceeded: return "IterationCapExceeded";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kParse: return "Parse";
  }
  return "Unknown";
}

}  // namespace pmaxflow
