#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qdivlab {

enum class ErrorCode {
  NotHermitian,
  NotPSD,
  BadTrace,
  NotSquare,
  BlochOutOfBall,
  NegativeProbability,
  BadNormalization,
  BadRank,
  DimensionOverflow,
  BadFactorization,
  BadIndexSet,
  SingularOnSupport,
  MismatchedBlocks,
  InvalidDistribution,
  NegativeEigenvalue,
  SupportViolation,
  SupportInconsistency,
  DegeneratePair,
  OutOfRange,
  RegimeViolation,
  BadPromise,
  BisectionFailure,
  FixtureFailure,
  UnsupportedFormat,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail);

}  // namespace qdivlab
