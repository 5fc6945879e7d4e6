#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eblab {

enum class ErrorCode {
  kDimensionMismatch,
  kRankDeficient,
  kProxUnavailable,
  kNoReference,
  kInnerSolve,
  kOffManifold,
  kNonConvergence,
  kIndefinite,
  kRepresentativeMismatch,
  kEmptySamples,
  kInvalidArgument,
  kUnknownFixture,
  kMalformedConfig,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

// Every failure in the library surfaces as a LabError; the code is stable and
// is what tests and the CLI match on.
class LabError : public std::runtime_error {
 public:
  LabError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kRankDeficient: return "rank-deficient";
    case ErrorCode::kProxUnavailable: return "prox unavailable";
    case ErrorCode::kNoReference: return "no-reference";
    case ErrorCode::kInnerSolve: return "inner-solve";
    case ErrorCode::kOffManifold: return "off-manifold";
    case ErrorCode::kNonConvergence: return "non-convergence";
    case ErrorCode::kIndefinite: return "indefinite reduced Hessian";
    case ErrorCode::kRepresentativeMismatch: return "representative mismatch";
    case ErrorCode::kEmptySamples: return "empty sample set";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kUnknownFixture: return "unknown fixture";
    case ErrorCode::kMalformedConfig: return "malformed config";
    case ErrorCode::kIo: return "io";
  }
  return "error";
}

}  // namespace eblab
