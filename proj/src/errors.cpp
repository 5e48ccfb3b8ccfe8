#include "singforge/errors.hpp"

namespace sf {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonManifold: return "NonManifold";
    case ErrorCode::NonTriangle: return "NonTriangle";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::NonOrientable: return "NonOrientable";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::CannotIsolate: return "CannotIsolate";
    case ErrorCode::NotAdjacent: return "NotAdjacent";
    case ErrorCode::BoundaryVertex: return "BoundaryVertex";
    case ErrorCode::ZeroFace: return "ZeroFace";
    case ErrorCode::AmbiguousWrap: return "AmbiguousWrap";
    case ErrorCode::HasBoundary: return "HasBoundary";
    case ErrorCode::NoBoundary: return "NoBoundary";
    case ErrorCode::NotADisk: return "NotADisk";
    case ErrorCode::WindingMismatch: return "WindingMismatch";
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::AlreadySingular: return "AlreadySingular";
    case ErrorCode::EndpointNotSingular: return "EndpointNotSingular";
    case ErrorCode::PathHitsSingular: return "PathHitsSingular";
    case ErrorCode::ChiMismatch: return "ChiMismatch";
    case ErrorCode::TooCoarse: return "TooCoarse";
    case ErrorCode::DegenerateZero: return "DegenerateZero";
    case ErrorCode::TangentAtZero: return "TangentAtZero";
    case ErrorCode::ZeroU: return "ZeroU";
    case ErrorCode::ConditionViolated: return "ConditionViolated";
    case ErrorCode::BetaSumNonzero: return "BetaSumNonzero";
    case ErrorCode::BetaNotAlternating: return "BetaNotAlternating";
    case ErrorCode::StartsAtSingular: return "StartsAtSingular";
    case ErrorCode::InconclusiveTrace: return "InconclusiveTrace";
    case ErrorCode::HasContour: return "HasContour";
    case ErrorCode::NonterminatingTrajectory: return "NonterminatingTrajectory";
    case ErrorCode::NotAdmissible: return "NotAdmissible";
    case ErrorCode::ZeroOnCircle: return "ZeroOnCircle";
    case ErrorCode::UnwrapJump: return "UnwrapJump";
    case ErrorCode::MultipleSingularities: return "MultipleSingularities";
    case ErrorCode::InternalError: return "InternalError";
  }
  return "UnknownError";
}

}  // namespace sf
