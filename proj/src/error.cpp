#include "specflow/error.hpp"

namespace specflow {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SpaceMismatch: return "SpaceMismatch";
    case ErrorKind::DominanceViolation: return "DominanceViolation";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::DepthExceeded: return "DepthExceeded";
    case ErrorKind::SamplerInconsistent: return "SamplerInconsistent";
    case ErrorKind::JunctionMismatch: return "JunctionMismatch";
    case ErrorKind::NotALoop: return "NotALoop";
    case ErrorKind::NonConstant: return "NonConstant";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::BranchFailure: return "BranchFailure";
    case ErrorKind::ResonanceHit: return "ResonanceHit";
    case ErrorKind::ResonanceOnPath: return "ResonanceOnPath";
    case ErrorKind::ThetaDependence: return "ThetaDependence";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

}  // namespace specflow
