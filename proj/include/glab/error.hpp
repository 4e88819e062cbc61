#pragma once

#include <stdexcept>
#include <string>

namespace glab {

// Mirrors glab_status in the C API; values must stay in sync with glab.h.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kSelfIntersection = 2,
  kOpenCurve = 3,
  kTooFewSamples = 4,
  kOutsideTube = 5,
  kInvalidPotential = 6,
  kDegeneratePotential = 7,
  kNotStarShaped = 8,
  kGridTooSmall = 9,
  kDegreeMismatch = 10,
  kDiverged = 11,
  kLinearSolveFailed = 12,
  kNewtonFailed = 13,
  kRegionInvalid = 14,
  kBoundaryContact = 15,
  kUnwrapInconsistent = 16,
  kInsufficientData = 17,
  kParse = 18,
  kIo = 19,
  kMissingFile = 20,
  kInternal = 99,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace glab
