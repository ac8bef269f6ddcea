#include "fbt/errors.hpp"

namespace fbt {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::EmptyState: return "EmptyState";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotUnitTrace: return "NotUnitTrace";
    case ErrorCode::NotTangent: return "NotTangent";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionCap: return "DimensionCap";
    case ErrorCode::BadRank: return "BadRank";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NotCommuting: return "NotCommuting";
    case ErrorCode::DegeneratePath: return "DegeneratePath";
    case ErrorCode::InfiniteYield: return "InfiniteYield";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::RankCollapse: return "RankCollapse";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace fbt
