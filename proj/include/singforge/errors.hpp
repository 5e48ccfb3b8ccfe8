#pragma once

#include <stdexcept>
#include <string>

namespace sf {

enum class ErrorCode {
  ParseError,
  NonManifold,
  NonTriangle,
  DegenerateFace,
  Disconnected,
  NonOrientable,
  NoPath,
  CannotIsolate,
  NotAdjacent,
  BoundaryVertex,
  ZeroFace,
  AmbiguousWrap,
  HasBoundary,
  NoBoundary,
  NotADisk,
  WindingMismatch,
  NotInterior,
  AlreadySingular,
  EndpointNotSingular,
  PathHitsSingular,
  ChiMismatch,
  TooCoarse,
  DegenerateZero,
  TangentAtZero,
  ZeroU,
  ConditionViolated,
  BetaSumNonzero,
  BetaNotAlternating,
  StartsAtSingular,
  InconclusiveTrace,
  HasContour,
  NonterminatingTrajectory,
  NotAdmissible,
  ZeroOnCircle,
  UnwrapJump,
  MultipleSingularities,
  InternalError,
};

const char* error_code_name(ErrorCode c);

// Single exception type for every domain failure; code() carries the taxonomy
// entry so tests and the CLI can dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) +
                           (detail.empty() ? "" : ": " + detail)),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sf
