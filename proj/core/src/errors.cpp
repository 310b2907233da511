#include "qdivlab/errors.hpp"

namespace qdivlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::BadTrace: return "BadTrace";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::BlochOutOfBall: return "BlochOutOfBall";
    case ErrorCode::NegativeProbability: return "NegativeProbability";
    case ErrorCode::BadNormalization: return "BadNormalization";
    case ErrorCode::BadRank: return "BadRank";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::BadFactorization: return "BadFactorization";
    case ErrorCode::BadIndexSet: return "BadIndexSet";
    case ErrorCode::SingularOnSupport: return "SingularOnSupport";
    case ErrorCode::MismatchedBlocks: return "MismatchedBlocks";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::SupportInconsistency: return "SupportInconsistency";
    case ErrorCode::DegeneratePair: return "DegeneratePair";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::RegimeViolation: return "RegimeViolation";
    case ErrorCode::BadPromise: return "BadPromise";
    case ErrorCode::BisectionFailure: return "BisectionFailure";
    case ErrorCode::FixtureFailure: return "FixtureFailure";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace qdivlab
