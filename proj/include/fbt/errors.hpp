#pragma once

#include <stdexcept>
#include <string>

namespace fbt {

enum class ErrorCode {
  NegativeWeight,
  NotNormalized,
  NotSquare,
  EmptyState,
  NotHermitian,
  NotPositive,
  NotUnitTrace,
  NotTangent,
  DimensionMismatch,
  DimensionCap,
  BadRank,
  SupportViolation,
  RankDeficient,
  NotCommuting,
  DegeneratePath,
  InfiniteYield,
  NotConverged,
  RankCollapse,
  InvalidArgument,
  InvalidConfig,
};

const char* to_string(ErrorCode code);

/// Library-wide exception. The code is stable and is what the CLI maps to
/// exit statuses; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace fbt
